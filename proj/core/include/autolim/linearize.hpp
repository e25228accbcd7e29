#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "autolim/model.hpp"

namespace autolim {

/// Linearization about the equilibrium: xbar' = A xbar + Bu ubar + Bd delta,
/// ybar = Cy xbar.
struct LinearPlant {
  Matrix A;
  Vector Bu;
  Vector Bd;
  RowVector Cy;
};

/// Linearized internal dynamics in the coordinates z = (x1 + y/alpha, x2, ..., xm)
/// with the output deviation ybar acting as input:
///   zbar' = A zbar + B ybar + C delta.
struct ZeroDynamics {
  Matrix A;
  Vector B;
  Vector C;
  double lambda_dom = 0.0;
  /// Left eigenvector of lambda_dom, first component 1.
  Vector v_dom;
  int unstable_count = 0;
  std::vector<std::complex<double>> spectrum;
};

struct DominantMode {
  double lambda = 0.0;
  Vector v;
  std::vector<std::complex<double>> spectrum;
};

using StateMap = std::function<Vector(const Vector&)>;

/// Central-difference Jacobian. Throws numeric if the map returns non-finite values.
Matrix jacobian_fd(const StateMap& field, const Vector& point, double step = 1e-6);

LinearPlant linearize_full(const PathwayModel& model);

ZeroDynamics zero_dynamics(const PathwayModel& model);

/// Closed-form dominant eigenpair and spectrum of the zero-dynamics matrix.
/// For cyclic networks throws hypothesis_violation when r <= a.
DominantMode dominant_mode(const PathwayModel& model);

/// Deviation of a full state from the equilibrium expressed in zero-dynamics
/// coordinates (x1bar + ybar/alpha, x2bar, ..., xmbar).
Vector zero_coordinates(const PathwayModel& model, const Eigen::Ref<const Vector>& state);

/// Full state whose zero-dynamics deviation is zbar and whose output deviation
/// is ybar.
Vector state_from_zero_coordinates(const PathwayModel& model, const Eigen::Ref<const Vector>& zbar,
                                   double ybar = 0.0);

/// State-feedback gain of the linearized natural controller, u ~ u* - gain*xbar.
RowVector natural_feedback_gain(const PathwayModel& model);

/// A - Bu*gain.
Matrix closed_loop(const LinearPlant& plant, const Eigen::Ref<const RowVector>& gain);

}  // namespace autolim
