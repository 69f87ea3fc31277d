#include "doctest.h"

#include "vnfp/dsl.hpp"
#include "vnfp/validate.hpp"

using namespace vnfp;

namespace {

AtomTable table() {
  AtomTable t;
  AtomAttrs a;
  a.abelian = true;
  a.diffuse = true;
  a.separability = Separability::Nonseparable;
  t.declare("A", a);
  t.declare("B", a);
  t.declare("N", AtomAttrs{});
  return t;
}

ErrorCode code_of(const Expr& e, const AtomTable& t) {
  try {
    validate_expr(e, t);
  } catch (const Error& err) {
    return err.code();
  }
  FAIL("expected a validation error");
  return ErrorCode::InvalidExpression;
}

}  // namespace

TEST_CASE("expr_equal is insensitive to operand order") {
  CHECK(expr_equal(ex::free_prod({ex::atom("A"), ex::lz()}), ex::free_prod({ex::lz(), ex::atom("A")})));
  CHECK(expr_equal(ex::fform(2, 5, "A"), ex::fform(2, 5, "A")));
  CHECK_FALSE(expr_equal(ex::fform(2, 5, "A"), ex::fform(5, 2, "A")));
  CHECK(expr_equal(ex::dsum({{ExtScalar(1, 3), ex::atom("A")}, {ExtScalar(2, 3), ex::trivial()}}),
                   ex::dsum({{ExtScalar(2, 3), ex::trivial()}, {ExtScalar(1, 3), ex::atom("A")}})));
}

TEST_CASE("canonicalize flattens and folds") {
  const Expr nested = ex::free_prod({ex::atom("B"), ex::free_prod({ex::atom("A"), ex::trivial()})});
  CHECK(canonicalize(nested) == ex::free_prod({ex::atom("A"), ex::atom("B")}));
  CHECK(canonicalize(ex::compress(ex::compress(ex::atom("A"), ExtScalar(1, 2)), ExtScalar(1, 3))) ==
        ex::compress(ex::atom("A"), ExtScalar(1, 6)));
  const Expr dd = ex::dsum({{ExtScalar(1, 2), ex::dsum({{ExtScalar(1, 2), ex::atom("A")}, {ExtScalar(1, 2), ex::lz()}})},
                            {ExtScalar(1, 2), ex::trivial()}});
  const Expr c = canonicalize(dd);
  REQUIRE(c.is<node::DSum>());
  CHECK(c.get<node::DSum>()->terms.size() == 3);
  const Expr once = canonicalize(nested);
  CHECK(canonicalize(once).id() == once.id());
}

TEST_CASE("paths address subterms") {
  const Expr e = canonicalize(ex::free_prod({ex::atom("A"), ex::compress(ex::atom("B"), ExtScalar(1, 2))}));
  const std::vector<std::size_t> path{1, 0};
  CHECK(subterm_at(e, path) == ex::atom("B"));
  const Expr r = replace_at(e, path, ex::lz());
  CHECK(subterm_at(r, path) == ex::lz());
  CHECK(node_count(e) == 4);
}

TEST_CASE("validation accepts well-formed expressions") {
  const AtomTable t = table();
  CHECK_NOTHROW(validate_expr(ex::dsum({{ExtScalar(1, 2), ex::atom("A")}, {ExtScalar(1, 2), ex::atom("A")}}), t));
  CHECK_NOTHROW(validate_expr(ex::fform(ExtScalar(3, 2), 1, "A"), t));
  CHECK_NOTHROW(validate_expr(ex::lfree(ExtScalar::infinity()), t));
  CHECK_NOTHROW(validate_expr(ex::free_pow(ex::atom("A"), ExtScalar::infinity()), t));
  const Expr v = validate_expr(ex::free_prod({ex::atom("B"), ex::atom("A")}), t);
  CHECK(validate_expr(v, t) == v);
}

TEST_CASE("validation rejects malformed expressions") {
  const AtomTable t = table();
  CHECK(code_of(ex::dsum({{ExtScalar(1, 3), ex::atom("A")}, {ExtScalar(1, 3), ex::atom("A")}}), t) ==
        ErrorCode::WeightSumNotOne);
  CHECK(code_of(ex::lfree(1), t) == ErrorCode::LFreeIndexOutOfRange);
  CHECK(code_of(ex::atom("Q"), t) == ErrorCode::UnknownAtom);
  CHECK(code_of(ex::fform(1, 0, "A"), t) == ErrorCode::FParamsOutOfDomain);
  CHECK(code_of(ex::compress(ex::atom("A"), 0), t) == ErrorCode::NonPositiveExponent);
  CHECK(code_of(ex::fform(2, 3, "N"), t) == ErrorCode::NotSelfSymmetric);
}
