#pragma once

/**
 * Seeded property suites over the whole engine, shared by `vnfp selftest`
 * and the acceptance binary. Reports are byte-identical for equal seeds.
 */

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "vnfp/normalizer.hpp"

namespace vnfp {

using Rng = std::mt19937_64;

struct SuiteResult {
  SuiteResult() = default;
  explicit SuiteResult(std::string n) : name(std::move(n)) {}

  std::string name;
  std::size_t passed = 0;
  std::size_t total = 0;
  std::vector<std::string> failures;  ///< first few failing cases

  bool ok() const { return passed == total; }
  void check(bool cond, const std::string& what);
};

/// Atoms used by generated expressions: A and B abelian diffuse
/// nonseparable, D self-symmetric non-abelian with unknown separability.
AtomTable selftest_atoms();

/// Random valid expression over selftest_atoms() of depth at most `depth`,
/// drawn from the fragment on which the calculus is confluent: infinite
/// F-forms are over a single atom (up to LZ), and a generated direct sum
/// pairs one piece with C.
Expr random_expr(Rng& rng, int depth);

/// Random admissible F-parameters with finite s.
FParams random_params(Rng& rng, bool allow_infinite_r);

SuiteResult suite_integer_powers();
SuiteResult suite_group_law(std::uint64_t seed, std::size_t cases);
SuiteResult suite_welldefined(std::uint64_t seed, std::size_t cases);
SuiteResult suite_distribution(std::uint64_t seed, std::size_t cases);
SuiteResult suite_base_identities();
SuiteResult suite_infinite_products();
SuiteResult suite_oracle();
/// Priority shuffles, trace replay, measure, idempotence.
SuiteResult suite_confluence(std::uint64_t seed, std::size_t cases, std::size_t shuffles);
SuiteResult suite_round_trip(std::uint64_t seed, std::size_t cases);
SuiteResult suite_rank_laws(std::uint64_t seed, std::size_t cases);
SuiteResult suite_fdim(std::uint64_t seed, std::size_t cases);

struct SelftestReport {
  std::uint64_t seed = 0;
  std::size_t cases = 0;
  std::vector<SuiteResult> suites;

  bool ok() const;
  std::string text() const;
};

SelftestReport run_selftest(std::uint64_t seed, std::size_t cases);

}  // namespace vnfp
