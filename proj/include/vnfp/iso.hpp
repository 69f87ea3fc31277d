#pragma once

/**
 * Three-valued isomorphism and fundamental-group queries on top of the
 * normalizer, using the sans-rank s * (non-separable mass) as the only
 * distinguishing invariant.
 */

#include <optional>
#include <string_view>

#include "vnfp/normalizer.hpp"

namespace vnfp {

/// s times the non-separable mass of the profile for F-forms over abelian
/// atoms with known masses; 0 for free group factors and separable values;
/// empty otherwise.
std::optional<ExtScalar> sans_rank(const CanonicalForm& form, const AtomTable& atoms);

enum class IsoKind { Isomorphic, NonIsomorphic, Unknown };

enum class UnknownReason {
  ResidualForm,       ///< one side did not reach a factor form
  SeparableOpen,      ///< both sides separable or rank 0 (free group factor problem)
  EqualRankOpen,      ///< equal non-zero ranks with different forms
  RankNotApplicable,  ///< some atom is non-abelian or has unknown mass
};

std::string_view to_string(IsoKind kind);
std::string_view to_string(UnknownReason reason);

struct IsoVerdict {
  IsoKind kind = IsoKind::Unknown;
  UnknownReason reason = UnknownReason::ResidualForm;  ///< Unknown only
  std::optional<ExtScalar> left_rank;
  std::optional<ExtScalar> right_rank;
  NormalizeResult left;
  NormalizeResult right;
};

IsoVerdict check_iso(const Expr& e1, const Expr& e2, const AtomTable& atoms);

enum class FGKind { Trivial, AllPositiveReals, Unknown };

std::string_view to_string(FGKind kind);

struct FGVerdict {
  FGKind kind = FGKind::Unknown;
  NormalizeResult result;
};

/// Throws NotAFactorForm when the expression normalizes to a residual or a
/// separable value.
FGVerdict fundamental_group(const Expr& e, const AtomTable& atoms);

}  // namespace vnfp
