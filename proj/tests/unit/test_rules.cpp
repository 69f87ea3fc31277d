#include "doctest.h"

#include <set>

#include "vnfp/dsl.hpp"
#include "vnfp/rules.hpp"

using namespace vnfp;

namespace {

constexpr const char* kDecl =
    "atom A {abelian, diffuse, nonseparable}; atom B {abelian, diffuse, nonseparable}; ";

AtomTable atoms() { return parse(std::string(kDecl)).atoms; }

Expr expr(const std::string& text) { return parse_validated(kDecl + text); }

/// Applies `rule` at the root of `lhs` and compares the result with `rhs`.
void check_rule(RuleId rule, const std::string& lhs, const std::string& rhs) {
  CAPTURE(lhs);
  const auto step = apply_rule(rule, expr(lhs), atoms());
  REQUIRE(step.has_value());
  CHECK(step->rule == rule);
  CHECK(render(canonicalize(step->after)) == render(expr(rhs)));
}

void check_no_match(RuleId rule, const std::string& lhs) {
  CAPTURE(lhs);
  CHECK_FALSE(apply_rule(rule, expr(lhs), atoms()).has_value());
}

}  // namespace

TEST_CASE("catalog") {
  const auto& cat = rule_catalog();
  CHECK(cat.size() == kRuleCount);
  std::set<std::string_view> names;
  for (std::size_t i = 0; i < cat.size(); ++i) {
    CHECK(static_cast<std::size_t>(cat[i].id) == i);
    CHECK_FALSE(cat[i].citation.empty());
    names.insert(cat[i].name);
    CHECK(rule_from_name(cat[i].name) == cat[i].id);
  }
  CHECK(names.size() == kRuleCount);
  CHECK_FALSE(rule_from_name("R-NOPE").has_value());
  const auto prio = default_priority();
  CHECK(std::set<RuleId>(prio.begin(), prio.end()).size() == kRuleCount);
}

TEST_CASE("rescale") {
  check_rule(RuleId::Rescale, "F(2, 3; A)^(1/2)", "F(4, 13; A)");
  check_rule(RuleId::Rescale, "LF(3)^(1/2)", "LF(9)");
  check_rule(RuleId::Rescale, "F(1, inf; A)^(3)", "F(1/3, inf; A)");
  check_no_match(RuleId::Rescale, "A^(1/2)");
}

TEST_CASE("add and multiatom") {
  check_rule(RuleId::Add, "F(1, 2; A) * F(1, 3; A)", "F(2, 5; A)");
  check_rule(RuleId::MultiAtom, "F(1, 2; A) * F(3, 3; B)", "F(4, 5; dsum(1/4: A, 3/4: B))");
  check_no_match(RuleId::Add, "F(1, 2; A) * F(1, 3; B)");
}

TEST_CASE("base identities") {
  check_rule(RuleId::BaseLZ, "A * LZ", "F(1, 1; A)");
  check_rule(RuleId::BaseLZ, "A * R", "F(1, 1; A)");
  check_rule(RuleId::IntForm, "fpow(A, 3) * LF(2)", "F(3, 2; A)");
  check_rule(RuleId::IntForm, "fpow(A, 2)", "F(2, 0; A)");
  check_rule(RuleId::CornerDSum, "fpow(A, 2) * dsum(1/3: A, 2/3: C)", "F(7/3, 2/9; A)");
  check_rule(RuleId::Tensor, "tensorM(3, A) * LF(2)", "F(1/3, 8/3; A)");
  check_rule(RuleId::DSumLF, "dsum(1/4: A, 3/4: C) * LF(2)", "F(1/4, 35/16; A)");
  check_rule(RuleId::DSumLZPow, "fpow(dsum(1/3: A, 2/3: LZ), 3)", "F(1, 2; A)");
  check_rule(RuleId::AtomThin, "F(2, 3; dsum(1/2: A, 1/2: LZ))", "F(1, 4; A)");
}

TEST_CASE("absorption") {
  check_rule(RuleId::AbsorbLF, "F(2, 3; A) * LF(3/2)", "F(2, 9/2; A)");
  check_rule(RuleId::AbsorbFdim, "F(2, 3; A) * M(2)", "F(2, 15/4; A)");
  check_rule(RuleId::AbsorbCornerInf, "F(2, inf; A) * dsum(1/2: A, 1/2: C)", "F(5/2, inf; A)");
  check_no_match(RuleId::AbsorbCornerInf, "F(2, 3; A) * dsum(1/2: A, 1/2: C)");
}

TEST_CASE("separable collapse and profiles") {
  check_rule(RuleId::SepCollapse, "LF(2) * LF(3)", "LF(5)");
  check_rule(RuleId::SepCollapse, "fpow(dsum(1/2: C, 1/2: C), 5)", "LF(5/2)");
  check_rule(RuleId::Profile, "dsum(1/4: A, 1/4: A, 1/2: B)", "dsum(1/2: A, 1/2: B)");
  check_no_match(RuleId::SepCollapse, "dsum(1/2: C, 1/2: C) * dsum(1/2: C, 1/2: C)");
}

TEST_CASE("infinite free products") {
  check_rule(RuleId::IFP, "ifp([], A, geom(1/2, 1/2))", "F(1, inf; A)");
  check_rule(RuleId::IFP, "ifp([], A, const(1))", "F(inf, inf; A)");
  check_rule(RuleId::IntForm, "fpow(A, inf)", "F(inf, inf; A)");
  check_rule(RuleId::IFP, "ifp([F(1, 2; A)], B, geom(1/2, 1/2))", "F(2, inf; dsum(1/2: A, 1/2: B))");
}

TEST_CASE("distribution over compressed free products") {
  const auto step = apply_rule(RuleId::DR00, expr("(F(2, 3; A) * F(1, 2; B))^(1/2)"), atoms());
  REQUIRE(step.has_value());
  CHECK(render(canonicalize(step->after)) == render(expr("F(2, 3; A)^(1/2) * F(1, 2; B)^(1/2) * LF(3)")));
  check_no_match(RuleId::DR00, "(F(2, 3; A) * F(1, 2; B))^(3/4)");
}

TEST_CASE("steps record parameters and citations") {
  const auto step = apply_rule(RuleId::Rescale, expr("F(2, 3; A)^(1/2)"), atoms());
  REQUIRE(step.has_value());
  CHECK_FALSE(step->strategy);
  CHECK(step->path.empty());
  CHECK_FALSE(step->params.empty());
  CHECK(rule_spec(step->rule).citation.find("F_{s/t") != std::string_view::npos);
}

TEST_CASE("ssa profiles") {
  const AtomTable t = atoms();
  CHECK(ssa_profile(expr("A"), t) == AtomProfile::single("A"));
  CHECK(ssa_profile(expr("dsum(1/2: A, 1/2: LZ)"), t) ==
        AtomProfile{{{"A", ExtScalar(1, 2)}, {"LZ", ExtScalar(1, 2)}}});
  CHECK_FALSE(ssa_profile(expr("LZ"), t).has_value());
  CHECK_FALSE(ssa_profile(expr("dsum(1/2: A, 1/2: C)"), t).has_value());
}

TEST_CASE("split strategy lends LF to a neighbour") {
  const Expr e = expr("F(2, inf; A) * tensorM(2, A)");
  bool any_rule = false;
  for (RuleId r : default_priority()) any_rule = any_rule || apply_rule(r, e, atoms()).has_value();
  CHECK_FALSE(any_rule);
  const auto steps = apply_split_strategy(e, atoms());
  REQUIRE_FALSE(steps.empty());
  for (const auto& s : steps) CHECK(s.strategy);
  CHECK(render(canonicalize(steps.back().after)) == render(expr("F(5/2, inf; A)")));
}
