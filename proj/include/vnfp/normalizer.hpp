#pragma once

/**
 * Innermost-first fixed-point rewriting over the rule catalog.
 */

#include <compare>
#include <optional>
#include <string_view>
#include <vector>

#include "vnfp/rules.hpp"

namespace vnfp {

enum class FormKind { FForm, IFGF, Separable, Residual };

enum class ResidualReason {
  NotAFactor,       ///< an atom or atomic direct sum on its own
  NoApplicableRule, ///< no rule guard holds anywhere in the expression
};

std::string_view to_string(FormKind kind);
std::string_view to_string(ResidualReason reason);

/// Terminal shape of a normalization. `expr` is always the terminal
/// expression; the remaining fields are filled according to `kind`.
struct CanonicalForm {
  FormKind kind = FormKind::Residual;
  Expr expr;
  FParams params;                 ///< FForm
  AtomProfile profile;            ///< FForm
  ExtScalar r;                    ///< IFGF
  std::optional<ExtScalar> fdim;  ///< Separable
  ResidualReason reason = ResidualReason::NoApplicableRule;  ///< Residual
};

CanonicalForm classify(const Expr& terminal);

struct ProofTrace {
  Expr input;  ///< canonical form of the validated input
  std::vector<RewriteStep> steps;
  Expr terminal;

  std::size_t step_count() const { return steps.size(); }
};

struct NormalizeResult {
  CanonicalForm form;
  ProofTrace trace;
};

struct NormalizeOptions {
  /// A permutation of the catalog; earlier rules are tried first.
  std::vector<RuleId> priority = default_priority();
  /// Check that the termination measure strictly drops on every move.
  bool check_measure = true;
};

/// Termination measure, compared lexicographically: a weighted size, the
/// spread of non-trivial direct-sum entries, LZ entries inside F-form
/// profiles, atom references, F-forms with finite r, and F-form profile
/// entries.
struct Measure {
  BigInt weight;
  BigInt spread;
  BigInt lz_entries;
  BigInt atom_refs;
  BigInt finite_r_forms;
  BigInt profile_entries;

  friend bool operator==(const Measure&, const Measure&) = default;
  friend std::strong_ordering operator<=>(const Measure& a, const Measure& b);
};

Measure measure(const Expr& e);

/// Normalizes a validated expression. Irreducible inputs come back as
/// Residual; an error here signals an engine bug.
NormalizeResult normalize(const Expr& e, const AtomTable& atoms, const NormalizeOptions& options = {});

/// Re-applies every step of `trace` from its input, checking each `before`
/// against the current subterm and each rule step against the catalog.
/// Returns the reconstructed terminal; throws InvalidExpression on mismatch.
Expr replay(const ProofTrace& trace, const AtomTable& atoms);

/// Normalizes both realizations (A^{*n} * LF_{index})^{n/s} of p, for
/// witnesses n1 and n2, over an abelian diffuse nonseparable A, and reports
/// whether they reach the same F-form parameters. Throws InadmissibleWitness.
bool check_welldefined(const FParams& p, const BigInt& n1, const BigInt& n2);

}  // namespace vnfp
