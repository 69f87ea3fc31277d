#include "doctest.h"

#include "vnfp/params.hpp"

using vnfp::BigInt;
using vnfp::ExtScalar;
using vnfp::FParams;

namespace {

const ExtScalar inf = ExtScalar::infinity();

/// Rescaling recomputed from the additive invariant (s, s + r - 1): under
/// compression by t it maps to (s/t, (s + r - 1)/t^2).
FParams oracle_rescale(const FParams& p, const ExtScalar& t) {
  if (p.r.is_infinite()) return {p.s / t, inf};
  const ExtScalar s = p.s / t;
  const ExtScalar mass = (p.s + p.r - ExtScalar(1)) / (t * t);
  return {s, mass - s + ExtScalar(1)};
}

}  // namespace

TEST_CASE("parameter domain") {
  CHECK(vnfp::in_param_domain({2, 0}));
  CHECK_FALSE(vnfp::in_param_domain({1, 0}));
  CHECK(vnfp::in_param_domain({ExtScalar(1, 2), inf}));
  CHECK(vnfp::in_param_domain({inf, inf}));
  CHECK_FALSE(vnfp::in_param_domain({inf, 3}));
  CHECK_FALSE(vnfp::in_param_domain({0, 5}));
  CHECK(vnfp::in_param_domain({3, -1}));
  CHECK_FALSE(vnfp::in_param_domain({3, -2}));
  CHECK_THROWS_AS(vnfp::require_param_domain({1, 0}), vnfp::Error);
}

TEST_CASE("rescale_params instances") {
  CHECK(vnfp::rescale_params({2, 0}, ExtScalar(1, 2)) == FParams{4, 1});
  CHECK(vnfp::rescale_params({1, inf}, 3) == FParams{ExtScalar(1, 3), inf});
  CHECK(vnfp::rescale_params({5, ExtScalar(38, 3)}, ExtScalar(10, 3)) == FParams{ExtScalar(3, 2), 1});
  CHECK(vnfp::rescale_params({2, 3}, ExtScalar(1, 2)) == FParams{4, 13});
  CHECK(vnfp::rescale_params({inf, inf}, ExtScalar(1, 2)) == FParams{inf, inf});
}

TEST_CASE("rescale_params agrees with the invariant oracle") {
  for (long sn = 1; sn <= 6; ++sn) {
    for (long rn = -3; rn <= 6; ++rn) {
      const FParams p{ExtScalar(sn, 2), ExtScalar(rn, 3)};
      if (!vnfp::in_param_domain(p)) continue;
      for (long tn = 1; tn <= 5; ++tn) {
        const ExtScalar t(tn, 3);
        CHECK(vnfp::rescale_params(p, t) == oracle_rescale(p, t));
        CHECK(vnfp::rescale_params(vnfp::rescale_params(p, t), ExtScalar(1) / t) == p);
      }
    }
  }
}

TEST_CASE("add_params") {
  CHECK(vnfp::add_params({1, 2}, {1, 3}) == FParams{2, 5});
  CHECK(vnfp::add_params({ExtScalar(3, 2), 1}, {ExtScalar(1, 2), ExtScalar(3, 4)}) == FParams{2, ExtScalar(7, 4)});
  CHECK(vnfp::add_params({2, inf}, {1, 0}) == FParams{3, inf});
}

TEST_CASE("def_expand picks the smallest admissible witness") {
  auto e = vnfp::def_expand({ExtScalar(3, 2), 1});
  CHECK(e.n == 2);
  CHECK(e.lf_index == ExtScalar(5, 3));
  CHECK(e.exponent == ExtScalar(4, 3));

  e = vnfp::def_expand({1, 2});
  CHECK(e.n == 1);
  CHECK(e.lf_index == ExtScalar(2));
  CHECK(e.exponent == ExtScalar(1));

  e = vnfp::def_expand({2, 0});
  CHECK(e.n == 5);
  CHECK(e.lf_index == ExtScalar(9, 4));
  CHECK(e.exponent == ExtScalar(5, 2));

  for (long n = 1; n < 5; ++n) CHECK_FALSE(vnfp::is_admissible_witness({2, 0}, BigInt(n)));
}

TEST_CASE("expansions at every admissible witness rescale back to p") {
  for (const FParams p : {FParams{ExtScalar(3, 2), 1}, FParams{2, 0}, FParams{ExtScalar(5, 2), ExtScalar(-1, 2)},
                          FParams{ExtScalar(7, 3), ExtScalar(5, 2)}}) {
    for (long n = 1; n <= 12; ++n) {
      if (!vnfp::is_admissible_witness(p, BigInt(n))) {
        CHECK_THROWS_AS(vnfp::expand_with(p, BigInt(n)), vnfp::Error);
        continue;
      }
      const auto e = vnfp::expand_with(p, BigInt(n));
      // A^{*n} * LF_idx is F(n, idx).
      CHECK(vnfp::rescale_params({ExtScalar(BigInt(n)), e.lf_index}, e.exponent) == p);
    }
  }
}

TEST_CASE("add_params rejects inadmissible sums") {
  CHECK(vnfp::add_params({1, 0}, {1, 0}) == FParams{2, 0});
  CHECK_THROWS_AS(vnfp::add_params({ExtScalar(1, 2), 0}, {ExtScalar(1, 4), 0}), vnfp::Error);
  CHECK_THROWS_AS(vnfp::add_params({0, 3}, {1, 3}), vnfp::Error);
}
