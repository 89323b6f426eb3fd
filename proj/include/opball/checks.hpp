#pragma once

// Randomized property suites run by `opball check`. Each suite draws its own
// generator from the run seed, so adding a suite does not perturb the others.

#include <cstdint>
#include <string>
#include <vector>

#include "opball/opcore.hpp"

namespace opball {

struct SuiteResult {
  std::string name;
  int trials = 0;
  int failures = 0;
  double worst_excess = 0.0;          // largest violation beyond the suite's slack
  std::vector<std::string> messages;  // first few failures

  bool passed() const noexcept { return failures == 0; }
};

struct CheckReport {
  bool passed = true;
  std::vector<SuiteResult> suites;
};

/// "appendix" or "all"; throws InvalidArgument otherwise.
std::vector<std::string> suite_names(const std::string& suite);

CheckReport run_checks(const std::string& suite, int trials, std::uint64_t seed,
                       const Tolerances& tol = kDefaultTolerances);

}  // namespace opball
