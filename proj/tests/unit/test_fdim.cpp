#include "doctest.h"

#include "vnfp/dsl.hpp"
#include "vnfp/fdim.hpp"

using namespace vnfp;

namespace {

Expr two_point(const ExtScalar& t) { return ex::dsum({{t, ex::trivial()}, {ExtScalar(1) - t, ex::trivial()}}); }

Expr copies(const Expr& e, long n) { return ex::free_prod(std::vector<Expr>(static_cast<std::size_t>(n), e)); }

}  // namespace

TEST_CASE("fdim examples") {
  CHECK(fdim(two_point(ExtScalar(1, 2))) == ExtScalar(1, 2));
  CHECK(fdim(ex::matrix(3)) == ExtScalar(8, 9));
  CHECK(fdim(ex::dsum({{ExtScalar(1, 2), ex::matrix(2)}, {ExtScalar(1, 2), ex::lz()}})) == ExtScalar(15, 16));
  CHECK(fdim(ex::lfree(ExtScalar(5, 2))) == ExtScalar(5, 2));
  CHECK(fdim(ex::lz()) == ExtScalar(1));
  CHECK(fdim(ex::hyperfinite()) == ExtScalar(1));
  CHECK(fdim(ex::trivial()) == ExtScalar(0));
  CHECK(fdim(ex::free_prod({ex::lfree(2), ex::matrix(2)})) == ExtScalar(11, 4));
}

TEST_CASE("fdim closed formula on multimatrix sums") {
  for (long k = 1; k <= 5; ++k) {
    std::vector<WeightedExpr> terms;
    for (long i = 0; i < k; ++i) terms.push_back({ExtScalar(1, k), ex::trivial()});
    CHECK(fdim(ex::dsum(terms)) == ExtScalar(k - 1, k));
  }
  for (long n = 1; n <= 6; ++n) CHECK(fdim(ex::matrix(n)) == ExtScalar(1) - ExtScalar(1, n * n));
  // 1 - (1/3)^2/4 - (2/3)^2/9
  CHECK(fdim(ex::dsum({{ExtScalar(1, 3), ex::matrix(2)}, {ExtScalar(2, 3), ex::matrix(3)}})) ==
        ExtScalar(1) - ExtScalar(1, 36) - ExtScalar(4, 81));
}

TEST_CASE("fdim is not applicable outside the separable class") {
  CHECK_FALSE(fdim(ex::atom("A")).has_value());
  CHECK_FALSE(fdim(ex::fform(2, 3, "A")).has_value());
  CHECK_FALSE(fdim(ex::free_prod({ex::lz(), ex::atom("A")})).has_value());
}

TEST_CASE("separable view") {
  const auto v = separable_view(ex::dsum({{ExtScalar(1, 2), ex::matrix(2)}, {ExtScalar(1, 2), ex::lfree(3)}}));
  REQUIRE(v);
  CHECK(v->atomic_summands.size() == 1);
  CHECK(v->diffuse_weight == ExtScalar(1, 2));
  CHECK(v->minimal_projection_traces() == std::vector<ExtScalar>{ExtScalar(1, 4)});
  CHECK_FALSE(v->is_diffuse());
  CHECK_FALSE(separable_view(ex::atom("A")).has_value());
}

TEST_CASE("factoriality conditions") {
  CHECK(is_factor_sufficient(ex::free_prod({ex::lz(), ex::lz()})));
  CHECK_FALSE(is_factor_sufficient(copies(two_point(ExtScalar(1, 2)), 2)));
  CHECK(is_factor_sufficient(ex::free_pow(two_point(ExtScalar(3, 4)), 4)));
  CHECK_FALSE(is_factor_sufficient(ex::free_pow(two_point(ExtScalar(4, 5)), 4)));
  CHECK(is_factor_sufficient(ex::free_prod({two_point(ExtScalar(1, 2)), ex::matrix(2)})));
  CHECK_FALSE(is_factor_sufficient(ex::free_prod({two_point(ExtScalar(4, 5)), ex::matrix(2)})));
}

TEST_CASE("collapse_separable") {
  CHECK(collapse_separable(copies(two_point(ExtScalar(1, 2)), 5)) == ex::lfree(ExtScalar(5, 2)));
  CHECK(collapse_separable(ex::free_prod({ex::lfree(2), ex::hyperfinite()})) == ex::lfree(3));
  const Expr c3 = ex::dsum({{ExtScalar(1, 3), ex::trivial()}, {ExtScalar(1, 3), ex::trivial()},
                            {ExtScalar(1, 3), ex::trivial()}});
  CHECK(collapse_separable(ex::free_prod({c3, ex::lz()})) == ex::lfree(ExtScalar(5, 3)));
  CHECK_THROWS_AS(collapse_separable(copies(two_point(ExtScalar(1, 2)), 2)), Error);
}
