#include "vnfp/params.hpp"

#include <string>

namespace vnfp {

bool in_param_domain(const FParams& p) {
  if (p.s.is_infinite()) return p.r.is_infinite();
  if (!p.s.is_positive()) return false;
  return p.r.is_infinite() || p.r > ExtScalar(1) - p.s;
}

void require_param_domain(const FParams& p, std::string_view what) {
  if (!in_param_domain(p)) {
    throw Error(ErrorCode::FParamsOutOfDomain,
                std::string(what) + " (s=" + p.s.str() + ", r=" + p.r.str() +
                    ") outside 0 < s, 1 - s < r <= inf");
  }
}

FParams rescale_params(const FParams& p, const ExtScalar& t) {
  if (t.is_infinite() || !t.is_positive()) {
    throw Error(ErrorCode::NonPositiveExponent,
                "rescaling exponent must be a finite positive rational, got " + t.str());
  }
  require_param_domain(p);
  if (p.s.is_infinite()) return p;
  const ExtScalar s = p.s / t;
  if (p.r.is_infinite()) return {s, ExtScalar::infinity()};
  return {s, (p.s + p.r - 1) / (t * t) - s + 1};
}

FParams add_params(const FParams& p, const FParams& q) {
  if (!p.s.is_positive() || !q.s.is_positive()) {
    throw Error(ErrorCode::FParamsOutOfDomain, "addition needs positive s on both operands");
  }
  const FParams sum{p.s + q.s, p.r + q.r};
  require_param_domain(sum, "sum of F parameters");
  return sum;
}

ExtScalar expansion_lf_index(const FParams& p, const BigInt& n) {
  require_param_domain(p);
  if (p.s.is_infinite()) {
    throw Error(ErrorCode::UndefinedInfinityPattern, "expansion requires finite s");
  }
  if (p.r.is_infinite()) return ExtScalar::infinity();
  const ExtScalar nn(n);
  return (p.s + p.r - 1) * nn * nn / (p.s * p.s) - nn + 1;
}

bool is_admissible_witness(const FParams& p, const BigInt& n) {
  return n >= 1 && expansion_lf_index(p, n) > ExtScalar(1);
}

Expansion expand_with(const FParams& p, const BigInt& n) {
  if (!is_admissible_witness(p, n)) {
    throw Error(ErrorCode::InadmissibleWitness,
                "witness n=" + n.get_str() + " does not give an LF index above 1 for (s=" +
                    p.s.str() + ", r=" + p.r.str() + ")");
  }
  return {n, expansion_lf_index(p, n), ExtScalar(n) / p.s};
}

Expansion def_expand(const FParams& p) {
  require_param_domain(p);
  if (p.s.is_infinite()) {
    throw Error(ErrorCode::UndefinedInfinityPattern, "expansion requires finite s");
  }
  if (p.r.is_infinite()) return expand_with(p, BigInt(1));
  // c n^2 - n > 0 with c = (s+r-1)/s^2 > 0  <=>  n > 1/c.
  const ExtScalar inv_c = p.s * p.s / (p.s + p.r - 1);
  BigInt n = inv_c.floor() + 1;
  if (n < 1) n = 1;
  return expand_with(p, n);
}

}  // namespace vnfp
