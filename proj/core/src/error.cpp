#include "autolim/error.hpp"

namespace autolim {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::contract_violation: return "contract_violation";
    case ErrorKind::domain: return "domain";
    case ErrorKind::invalid_model: return "invalid_model";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::assumption_violation: return "assumption_violation";
    case ErrorKind::hypothesis_violation: return "hypothesis_violation";
    case ErrorKind::degenerate_control: return "degenerate_control";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::spectrum_degeneracy: return "spectrum_degeneracy";
    case ErrorKind::synthesis: return "synthesis";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::positivity: return "positivity";
    case ErrorKind::blow_up: return "blow_up";
    case ErrorKind::bracket: return "bracket";
    case ErrorKind::undefined_ratio: return "undefined_ratio";
    case ErrorKind::invalid_parameter: return "invalid_parameter";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace autolim
