#pragma once

#include "vnfp/expr.hpp"

namespace vnfp {

/// Checks every structural invariant, resolves atoms against the table
/// (separable diffuse abelian atoms become LZ), normalizes F-form profiles and
/// returns the canonical tree. Idempotent.
///
/// Throws WeightSumNotOne, LFreeIndexOutOfRange, UnknownAtom,
/// FParamsOutOfDomain, NonPositiveExponent, NotSelfSymmetric, InvalidExpression.
Expr validate_expr(const Expr& e, const AtomTable& atoms);

}  // namespace vnfp
