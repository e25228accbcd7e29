#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace autolim {

enum class ErrorKind {
  contract_violation,
  domain,
  invalid_model,
  unsupported,
  assumption_violation,
  hypothesis_violation,
  degenerate_control,
  numeric,
  spectrum_degeneracy,
  synthesis,
  convergence,
  precondition,
  positivity,
  blow_up,
  bracket,
  undefined_ratio,
  invalid_parameter,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind so the
/// CLI can map it onto its exit-code contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

inline void require(bool condition, ErrorKind kind, const char* message) {
  if (!condition) fail(kind, message);
}

}  // namespace autolim
