#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"
#include "verify.hpp"

#include "autolim/error.hpp"

namespace autolim::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_config = 1,
  exit_hypothesis = 2,
  exit_integration = 3,
  exit_verification = 4,
};

struct Invocation {
  /// Overrides config.out.
  std::optional<std::string> out;
  /// Overrides verify.seed.
  std::optional<unsigned long long> seed;
  double tol_scale = 1.0;
};

/// Exit code for a library error raised while running `command`.
int exit_code_for(ErrorKind kind);

/// Machine-readable error document.
Json error_json(const std::string& status, const std::string& message, int exit_code);

Json limits_json(const HardLimitReport& report);
void write_sweep_csv(std::ostream& out, const SweepTable& table);

/// Runs one command. Reports go to `out` (or the output file); the error
/// document for a failed run goes to `out` as well.
int run(const RunConfig& config, const Invocation& inv, std::ostream& out, std::ostream& err);

/// JSON dump with a trailing newline.
std::string dump(const Json& doc);

}  // namespace autolim::cli
