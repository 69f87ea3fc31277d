#pragma once

/**
 * Rule catalog of the F_{s,r} calculus. Every rule matches at the root of the
 * expression it is given; traversal is the normalizer's job. Inputs are
 * expected to be validated and canonical.
 */

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vnfp/expr.hpp"

namespace vnfp {

enum class RuleId {
  Profile,
  SepCollapse,
  IntForm,
  BaseLZ,
  CornerDSum,
  Tensor,
  DSumLF,
  DSumLZPow,
  DSumExchange,
  IFP,
  MultiAtom,
  AbsorbLF,
  AbsorbFdim,
  AbsorbCornerInf,
  Add,
  AtomThin,
  DR00,
  Rescale,
};

inline constexpr std::size_t kRuleCount = 18;

struct RuleSpec {
  RuleId id;
  std::string_view name;      ///< e.g. "R-RESCALE"
  std::string_view pattern;   ///< informal left-hand side
  std::string_view citation;  ///< the identity the rule applies
};

const std::vector<RuleSpec>& rule_catalog();
const RuleSpec& rule_spec(RuleId id);
std::string_view rule_name(RuleId id);
std::optional<RuleId> rule_from_name(std::string_view name);

/// Fixed normalizer priority (highest first).
std::vector<RuleId> default_priority();

struct RuleParam {
  std::string name;
  std::string value;

  friend bool operator==(const RuleParam&, const RuleParam&) = default;
};

struct RewriteStep {
  RuleId rule;
  std::vector<RuleParam> params;
  Expr before;
  /// Replacement for `before`; not necessarily canonical.
  Expr after;
  /// Child indices from the root of the whole expression to `before`.
  std::vector<std::size_t> path;
  /// Part of a multi-step strategy move: the step is an instance of the
  /// rule's identity on chosen operands (or the identity read right to left,
  /// see the "direction" parameter) rather than the rule's own match.
  bool strategy = false;
};

/// Applies one rule at the root. Empty when the pattern or guard fails.
std::optional<RewriteStep> apply_rule(RuleId rule, const Expr& e, const AtomTable& atoms);

/// Fallback move for a free product on which no rule matches: an F-form
/// factor lends part of its r (or all of it when r = inf) as an LF factor, or
/// F_{1,1}(P) is read back as P * LZ, so that a neighbouring piece can be
/// turned into an F-form and merged. Returns the three steps (each with
/// `before` equal to the canonical form of the previous `after`), or an empty
/// vector when no move ends in a merge.
std::vector<RewriteStep> apply_split_strategy(const Expr& e, const AtomTable& atoms);

/// Profile of a self-symmetric atomic algebra: a self-symmetric atom, or a
/// direct sum of self-symmetric atoms and LZ with at least one non-LZ part.
std::optional<AtomProfile> ssa_profile(const Expr& e, const AtomTable& atoms);

}  // namespace vnfp
