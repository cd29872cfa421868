#pragma once

#include <string>
#include <vector>

#include "cohex/core.hpp"

namespace cohex {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  double tol = 1e-10;
  long max_dim = 32;
  unsigned long long seed = 20240811ULL;
};

// Runs the library-wide invariant checks: operator algebra, interaction
// certificates, monotone reservoir coherence, catalytic bounds and repeat
// invariance, agreement of sequential simulation with the closed iterated
// expressions, closed-form/simulation agreement, and the series limits.
std::vector<CheckResult> run_verification(const VerifyOptions& options);

}  // namespace cohex
