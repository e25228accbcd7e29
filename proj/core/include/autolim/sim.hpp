#pragma once

#include <ostream>
#include <variant>
#include <vector>

#include "autolim/model.hpp"

namespace autolim {

struct ZeroDisturbance {
  friend bool operator==(const ZeroDisturbance&, const ZeroDisturbance&) = default;
};

/// magnitude for t >= onset.
struct StepDisturbance {
  double magnitude = 0.0;
  double onset = 0.0;
  friend bool operator==(const StepDisturbance&, const StepDisturbance&) = default;
};

/// amplitude * sin(omega (t - start)) on [start, stop).
struct SineDisturbance {
  double amplitude = 0.0;
  double omega = 1.0;
  double start = 0.0;
  double stop = 1.0;
  friend bool operator==(const SineDisturbance&, const SineDisturbance&) = default;
};

/// magnitude on [start, stop).
struct PulseDisturbance {
  double magnitude = 0.0;
  double start = 0.0;
  double stop = 1.0;
  friend bool operator==(const PulseDisturbance&, const PulseDisturbance&) = default;
};

using DisturbanceSpec =
    std::variant<ZeroDisturbance, StepDisturbance, SineDisturbance, PulseDisturbance>;

void validate(const DisturbanceSpec& dist);
double disturbance_value(const DisturbanceSpec& dist, double t);

/// u = 2/(1+y^(2h)).
struct NaturalController {
  friend bool operator==(const NaturalController&, const NaturalController&) = default;
};

struct ConstantController {
  double value = 1.0;
  friend bool operator==(const ConstantController&, const ConstantController&) = default;
};

/// u = u* + offset - gain (state - state*).
struct LinearStateFeedback {
  RowVector gain;
  double offset = 0.0;
  friend bool operator==(const LinearStateFeedback& lhs, const LinearStateFeedback& rhs) {
    return lhs.offset == rhs.offset && lhs.gain.size() == rhs.gain.size() && lhs.gain == rhs.gain;
  }
};

using ControllerSpec = std::variant<NaturalController, ConstantController, LinearStateFeedback>;

void validate(const ControllerSpec& controller, const PathwayModel& model);
double control_value(const ControllerSpec& controller, const PathwayModel& model,
                     const Eigen::Ref<const Vector>& state);

struct Trajectory {
  std::vector<double> t;
  /// Full states (x1..xm, y).
  std::vector<Vector> x;
  std::vector<double> y;
  std::vector<double> u;
  std::vector<double> delta;
  double y_star = 1.0;
  /// Trapezoid integral of (y - y*)^2 over the whole integration grid.
  double l2_y_dev = 0.0;
  /// Same over the last tenth of the horizon.
  double l2_y_dev_tail = 0.0;
  double l2_delta = 0.0;
  bool converged = false;
  /// Not converged and the late output swing keeps at least 90% of the early one.
  bool sustained_oscillation = false;
};

struct IntegrateOptions {
  /// Keep every stride-th step in the stored samples; functionals always use
  /// every step.
  int record_stride = 1;
};

/// Classical fixed-step RK4. Throws positivity when a stage leaves the
/// nonnegative orthant by more than 1e-9 and blow_up on non-finite states.
Trajectory integrate(const PathwayModel& model, const ControllerSpec& controller,
                     const DisturbanceSpec& dist, const Vector& x0, double t_end, double dt,
                     const IntegrateOptions& options = {});

/// sqrt(l2_y_dev / l2_delta)
double empirical_gain(const Trajectory& traj);

/// Maximum real part of the natural closed-loop Jacobian of the two-state model.
double natural_closed_loop_abscissa(const TwoStateParams& p);

/// Bisection for the h at which the natural closed loop loses stability.
double stability_boundary_probe(const TwoStateParams& p, double h_lo, double h_hi);

struct EnergyRun {
  Trajectory trajectory;
  double horizon = 0.0;
  int doublings = 0;
};

struct EnergyRunOptions {
  double dt = 1e-3;
  double horizon = 200.0;
  int record_stride = 100;
};

/// Zero-disturbance run whose horizon doubles until the state has converged and
/// the tail energy is below 0.1% of the total. Throws convergence otherwise.
EnergyRun energy_run(const PathwayModel& model, const ControllerSpec& controller,
                     const Vector& x0, const EnergyRunOptions& options = {});

/// Columns t, x1..xm, y, u, delta with 17 significant digits.
void write_trajectory_csv(std::ostream& out, const PathwayModel& model, const Trajectory& traj);

}  // namespace autolim
