#pragma once

/**
 * Free dimension on the separable class: multimatrix direct sums, diffuse
 * hyperfinite algebras, interpolated free group factors, finite direct sums
 * and free products of those.
 */

#include <optional>
#include <span>
#include <vector>

#include "vnfp/expr.hpp"

namespace vnfp {

struct AtomicSummand {
  ExtScalar weight;
  BigInt size;
};

struct LFSummand {
  ExtScalar weight;
  ExtScalar r;
};

/// A direct-sum decomposition into matrix blocks, diffuse hyperfinite blocks
/// and interpolated free group factor blocks. diffuse_weight counts both of
/// the latter kinds.
struct SeparableClassView {
  std::vector<AtomicSummand> atomic_summands;
  ExtScalar diffuse_weight{0};
  std::vector<LFSummand> lf_contributions;

  /// 1 - sum a^2/n^2 + sum b^2 (r - 1).
  ExtScalar fdim() const;
  /// Traces a/n of the minimal projections of the matrix blocks.
  std::vector<ExtScalar> minimal_projection_traces() const;
  bool is_diffuse() const { return atomic_summands.empty(); }
};

/// Direct-sum view of a single block (not a free product at the root);
/// nullopt outside the separable class.
std::optional<SeparableClassView> separable_view(const Expr& e);

/// Free dimension, additive over free products; nullopt (NotApplicable) for
/// anything mentioning an F-form, an infinite free product or an atom other
/// than LZ.
std::optional<ExtScalar> fdim(const Expr& e);

inline bool in_separable_class(const Expr& e) { return fdim(e).has_value(); }

/// Conservative sufficient conditions for the free product of `members` to
/// be a II_1 factor:
///  (a) at least two members and one of them diffuse;
///  (b) exactly B * M(k) with every minimal projection of B of trace < 1 - 1/k^2;
///  (c) n >= 3 (or infinitely many) copies of dsum(t: C, 1-t: C) with
///      max(t, 1-t) < n/(n+1).
/// FreePow members count as that many copies of their base.
bool is_factor_sufficient(std::span<const Expr> members);

/// Same, for a FreeProd or FreePow expression.
bool is_factor_sufficient(const Expr& e);

/// Replaces a factor-certified free product of separable-class members by
/// LF(sum of free dimensions). Throws NotAFactorCertificate when no condition
/// applies or the sum does not exceed 1.
Expr collapse_separable(const Expr& e);

}  // namespace vnfp
