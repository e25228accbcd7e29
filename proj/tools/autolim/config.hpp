#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "autolim/limits.hpp"
#include "autolim/model.hpp"
#include "autolim/sim.hpp"

namespace autolim::cli {

using Json = nlohmann::json;

/// Malformed or inconsistent configuration document (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { limits, sweep, simulate, verify };

std::string to_string(Command command);

struct SimulateBlock {
  ControllerSpec controller = NaturalController{};
  DisturbanceSpec disturbance = ZeroDisturbance{};
  double t_end = 200.0;
  double dt = 1e-3;
  int record_stride = 1;

  friend bool operator==(const SimulateBlock&, const SimulateBlock&) = default;
};

struct VerifyBlock {
  /// Suite names or module prefixes ("limits" selects every limits.* suite).
  /// Empty selects everything.
  std::vector<std::string> suites;
  std::optional<unsigned long long> seed;
  std::optional<std::string> inject_fault;

  friend bool operator==(const VerifyBlock&, const VerifyBlock&) = default;
};

struct RunConfig {
  Command command = Command::verify;
  std::optional<PathwayModel> model;
  std::optional<Vector> initial_state;
  std::vector<SweepAxis> axes;
  SimulateBlock simulate;
  VerifyBlock verify;
  std::optional<std::string> out;
};

bool operator==(const RunConfig& lhs, const RunConfig& rhs);

RunConfig parse_config(const Json& doc);
RunConfig parse_config_text(const std::string& text);
Json serialize_config(const RunConfig& config);

Json model_to_json(const PathwayModel& model);
PathwayModel model_from_json(const Json& doc);

}  // namespace autolim::cli
