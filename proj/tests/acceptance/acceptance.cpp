#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "vnfp/selftest.hpp"

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Criterion {
  std::string label;
  std::function<vnfp::SuiteResult()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"rescaling instances", [] { return vnfp::suite_integer_powers(); }},
      {"group law", [] { return vnfp::suite_group_law(kSeed, 10000); }},
      {"well-definedness", [] { return vnfp::suite_welldefined(kSeed + 1, 500); }},
      {"addition/distribution coherence", [] { return vnfp::suite_distribution(kSeed + 2, 2000); }},
      {"base identities grid", [] { return vnfp::suite_base_identities(); }},
      {"infinite products", [] { return vnfp::suite_infinite_products(); }},
      {"oracle verdicts", [] { return vnfp::suite_oracle(); }},
      {"confluence shuffle", [] { return vnfp::suite_confluence(kSeed + 3, 10000, 5); }},
      {"round trip", [] { return vnfp::suite_round_trip(kSeed + 4, 10000); }},
      {"free dimension", [] { return vnfp::suite_fdim(kSeed + 6, 1000); }},
  };

  const auto start = std::chrono::steady_clock::now();
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const vnfp::SuiteResult r = criteria[i].run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %zu %s: %zu/%zu checks (%.2fs)\n", r.ok() ? "PASS" : "FAIL", i + 1, criteria[i].label.c_str(),
                r.passed, r.total, secs);
    for (const auto& f : r.failures) std::printf("  failing case: %s\n", f.c_str());
    if (!r.ok()) ++failed;
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("total wall time %.2fs\n", total);
  return failed == 0 ? 0 : 1;
}
