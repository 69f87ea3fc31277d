#pragma once

/// Parameter-level calculus of the two-parameter family F_{s,r}.

#include "vnfp/ext_scalar.hpp"

namespace vnfp {

/// (s, r) of F_{s,r}. Admissible when 0 < s < inf and 1 - s < r <= inf, or
/// s = r = inf (the infinite free power A^{*inf}).
struct FParams {
  ExtScalar s;
  ExtScalar r;

  friend bool operator==(const FParams&, const FParams&) = default;
};

bool in_param_domain(const FParams& p);

/// Throws FParamsOutOfDomain naming `what` when p is not admissible.
void require_param_domain(const FParams& p, std::string_view what = "F parameters");

/// (F_{s,r})^t = F_{s/t, (s+r-1)/t^2 - s/t + 1}; infinity propagates.
FParams rescale_params(const FParams& p, const ExtScalar& t);

/// F_{s,r} * F_{v,u} = F_{s+v, r+u}. An operand may sit on the boundary
/// (a bare atom is (1, 0)); the sum must be admissible.
FParams add_params(const FParams& p, const FParams& q);

/// Realization of F_{s,r} as (A^{*n} * LF_{lf_index})^{exponent}.
struct Expansion {
  BigInt n;
  ExtScalar lf_index;
  ExtScalar exponent;
};

/// LF index (s+r-1) n^2 / s^2 - n + 1 for witness n (finite s only).
ExtScalar expansion_lf_index(const FParams& p, const BigInt& n);

/// True when witness n yields an LF index strictly above 1.
bool is_admissible_witness(const FParams& p, const BigInt& n);

/// Smallest admissible witness.
Expansion def_expand(const FParams& p);

/// Expansion at a caller-chosen witness; throws InadmissibleWitness.
Expansion expand_with(const FParams& p, const BigInt& n);

}  // namespace vnfp
