#include "doctest.h"

#include "vnfp/dsl.hpp"
#include "vnfp/iso.hpp"

using namespace vnfp;

namespace {

constexpr const char* kDecl =
    "atom A {abelian, diffuse, nonseparable}; atom X {abelian, separable, selfsym}; atom D {selfsym}; ";

AtomTable atoms() { return parse(std::string(kDecl)).atoms; }

Expr expr(const std::string& text) { return parse_validated(kDecl + text); }

IsoVerdict iso(const std::string& a, const std::string& b) { return check_iso(expr(a), expr(b), atoms()); }

FGKind fg(const std::string& text) { return fundamental_group(expr(text), atoms()).kind; }

}  // namespace

TEST_CASE("sans-rank") {
  const AtomTable t = atoms();
  CHECK(sans_rank(normalize(expr("F(3, 7; A)"), t).form, t) == ExtScalar(3));
  CHECK(sans_rank(normalize(expr("F(3/2, 2; dsum(1/2: A, 1/2: LZ))"), t).form, t) == ExtScalar(3, 4));
  CHECK(sans_rank(normalize(expr("LF(5)"), t).form, t) == ExtScalar(0));
  CHECK_FALSE(sans_rank(normalize(expr("F(2, 3; D)"), t).form, t).has_value());
}

TEST_CASE("isomorphism verdicts") {
  IsoVerdict v = iso("F(2, 3; A)", "F(1, 1; A) * F(1, 2; A)");
  CHECK(v.kind == IsoKind::Isomorphic);

  v = iso("F(2, 5; A)", "F(3, 4; A)");
  CHECK(v.kind == IsoKind::NonIsomorphic);
  CHECK(v.left_rank == ExtScalar(2));
  CHECK(v.right_rank == ExtScalar(3));

  v = iso("F(2, 5; X)", "F(3, 4; X)");
  CHECK(v.kind == IsoKind::Unknown);
  CHECK(v.reason == UnknownReason::SeparableOpen);

  v = iso("LF(2)", "LF(3)");
  CHECK(v.kind == IsoKind::Unknown);
  CHECK(v.reason == UnknownReason::SeparableOpen);

  v = iso("F(2, 5; A)", "F(2, 6; A)");
  CHECK(v.kind == IsoKind::Unknown);
  CHECK(v.reason == UnknownReason::EqualRankOpen);

  v = iso("A", "F(2, 6; A)");
  CHECK(v.kind == IsoKind::Unknown);
  CHECK(v.reason == UnknownReason::ResidualForm);

  v = iso("F(2, 5; D)", "F(3, 4; D)");
  CHECK(v.kind == IsoKind::Unknown);
  CHECK(v.reason == UnknownReason::RankNotApplicable);

  v = iso("F(2, 5; A)", "LF(7)");
  CHECK(v.kind == IsoKind::NonIsomorphic);
}

TEST_CASE("rank is invariant under rescaling identities") {
  const IsoVerdict v = iso("(fpow(A, 2))^(1/3)", "F(6, 4; A)");
  CHECK(v.kind == IsoKind::Isomorphic);
}

TEST_CASE("fundamental group") {
  CHECK(fg("fpow(A, inf)") == FGKind::AllPositiveReals);
  CHECK(fg("F(2, 3; A)") == FGKind::Trivial);
  CHECK(fg("F(2, 3; X)") == FGKind::Unknown);
  CHECK(fg("LF(inf)") == FGKind::AllPositiveReals);
  CHECK(fg("LF(3)") == FGKind::Unknown);
  CHECK_THROWS_AS(fundamental_group(expr("A"), atoms()), Error);
  CHECK_THROWS_AS(fundamental_group(expr("M(3)"), atoms()), Error);
  CHECK(to_string(FGKind::AllPositiveReals) == "R_+^*");
}
