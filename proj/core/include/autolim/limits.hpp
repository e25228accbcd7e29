#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "autolim/linearize.hpp"
#include "autolim/model.hpp"

namespace autolim {

/// Hard limit on the disturbance-attenuation gain.
double gamma_closed_form(const PathwayModel& model);

/// |v'C| / |v'B| from the dominant eigenpair of the zero dynamics.
double gamma_dominant_oracle(const ZeroDynamics& zd);

struct EnergyLimit {
  double H = 0.0;
  double z_tilde0 = 0.0;
};

/// Hard limit on the output energy (1/2 of the integral of ybar^2) from the
/// initial state (x0, y0). Two-state and chain families only.
EnergyLimit energy_closed_form(const PathwayModel& model, const Vector& x0, double y0);

/// lambda (v'zbar0)^2 / (v'B)^2, the scalar minimum-energy Riccati cost of the
/// dominant mode.
double energy_oracle(const ZeroDynamics& zd, const Vector& zbar0);

/// H / z_tilde0^2. Two-state and chain families only.
double energy_coefficient(const PathwayModel& model);

struct Approximations {
  double gamma_approx = 0.0;
  double energy_coeff_approx = 0.0;
};

/// Large-n approximations of Gamma and of the energy coefficient.
Approximations approximations(const ChainParams& p);

/// Gain c v' with c = (lambda + margin)/(v'B), which moves the dominant mode to
/// -margin and leaves the rest of the spectrum in place.
RowVector dominant_mode_gain(const ZeroDynamics& zd, double margin = 1.0);

struct Discrepancies {
  double gamma = 0.0;
  std::optional<double> energy;
};

struct HardLimitReport {
  std::string status = "ok";
  Family family = Family::two_state;
  double gamma_closed = 0.0;
  double gamma_oracle = 0.0;
  /// Absent for cyclic networks, which have no closed-form energy limit.
  std::optional<double> energy_closed;
  double energy_oracle = 0.0;
  std::optional<double> gamma_approx;
  std::optional<double> energy_coeff_approx;
  double lambda_dom = 0.0;
  int unstable_count = 0;
  double z_tilde0 = 0.0;
  Discrepancies discrepancies;
  /// The energy limit ignores the cubic remainder of the value function.
  std::string energy_qualifier = "quadratic leading term";
};

/// |closed - oracle| / max(|closed|, 1e-300)
double relative_discrepancy(double closed, double oracle);

/// Aggregates the closed forms and oracles. Without an initial state the
/// deviation is a unit step in x1.
HardLimitReport analyze(const PathwayModel& model, const std::optional<Vector>& initial_state = {});

struct SweepAxis {
  std::string name;
  std::vector<double> values;

  friend bool operator==(const SweepAxis&, const SweepAxis&) = default;
};

struct SweepRow {
  std::vector<double> point;
  double gamma_closed = 0.0;
  double gamma_approx = 0.0;
  double approx_rel_err = 0.0;
  double energy_coeff = 0.0;
  double energy_coeff_approx = 0.0;
};

struct SweepTable {
  std::vector<std::string> axes;
  std::vector<SweepRow> rows;
};

using SweepBase = std::variant<TwoStateParams, ChainParams>;

/// Cartesian product over the axes, first axis varying slowest. Two-state bases
/// accept alpha, k, g; chain bases accept alpha, K, g, n. Two-state
/// approximations use the n = 1 chain.
SweepTable sweep(const SweepBase& base, const std::vector<SweepAxis>& axes);

}  // namespace autolim
