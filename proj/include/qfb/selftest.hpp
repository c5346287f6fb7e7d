#pragma once

// Property suites run by `qfb selftest`. Everything is exact and seeded, so
// two runs with the same seed produce the same results.

#include <cstdint>
#include <string>
#include <vector>

namespace qfb {

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::size_t skipped = 0;
  std::string first_failure;
};

struct SelftestOptions {
  std::uint64_t seed = 0;
  std::size_t scale = 1;  // multiplies the per-suite case counts
};

std::vector<SuiteResult> run_selftest(const SelftestOptions& opt = {});

}  // namespace qfb
