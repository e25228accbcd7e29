#pragma once

#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace autolim::cli {

struct VerifyOptions {
  unsigned long long seed = 42;
  /// Multiplies every discrepancy tolerance (AUTOLIM_TOL_SCALE).
  double tol_scale = 1.0;
  std::vector<std::string> suites;
  /// "gamma_closed" perturbs the closed-form gain inside the suites.
  std::optional<std::string> inject_fault;
};

struct SuiteResult {
  std::string name;
  int cases = 0;
  double max_discrepancy = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  std::string detail;
};

struct VerifyReport {
  VerifyOptions options;
  std::vector<SuiteResult> suites;
  bool passed = true;
};

/// All suite names in execution order.
std::vector<std::string> suite_names();

/// Throws ConfigError for unknown suite selectors or fault names.
VerifyReport run_verification(const VerifyOptions& options);

Json to_json(const VerifyReport& report);

}  // namespace autolim::cli
