#include "autolim/linearize.hpp"

#include <cmath>
#include <string>

#include "autolim/error.hpp"
#include "autolim/numerics.hpp"

namespace autolim {
namespace {

int count_unstable(const std::vector<std::complex<double>>& spectrum) {
  int count = 0;
  for (const auto& s : spectrum) {
    if (s.real() > 0.0) ++count;
  }
  return count;
}

// Spectrum and left eigenvector of the dominant mode without enforcing r > a.
DominantMode mode_structure(const PathwayModel& model) {
  DominantMode mode;
  switch (model.family()) {
    case Family::two_state: {
      const auto& p = model.two_state_params();
      mode.lambda = p.k / p.alpha;
      mode.v = Vector::Ones(1);
      mode.spectrum = {mode.lambda};
      break;
    }
    case Family::chain: {
      const auto& p = model.chain_params();
      const double rho = std::pow((p.alpha + 1.0) / p.alpha, 1.0 / p.n);
      mode.spectrum = shifted_power_roots(p.K, p.K * rho, p.n);
      mode.lambda = p.K * (rho - 1.0);
      mode.spectrum[0] = mode.lambda;
      mode.v.resize(p.n);
      double w = 1.0;
      for (int i = 0; i < p.n; ++i, w *= rho) mode.v[i] = w;
      break;
    }
    case Family::cyclic: {
      const auto& net = model.cyclic_network();
      const double a = net.a();
      const double r = net.r();
      const Vector gp = net.output_slopes();
      mode.spectrum = shifted_power_roots(a, r, net.n());
      mode.lambda = r - a;
      mode.spectrum[0] = mode.lambda;
      mode.v.resize(net.n());
      mode.v[0] = 1.0;
      for (int i = 1; i < net.n(); ++i) mode.v[i] = mode.v[i - 1] * r / gp[i - 1];
      break;
    }
  }
  return mode;
}

}  // namespace

Matrix jacobian_fd(const StateMap& field, const Vector& point, double step) {
  require(step > 0.0, ErrorKind::contract_violation, "finite-difference step must be positive");
  const Vector f0 = field(point);
  Matrix J(f0.size(), point.size());
  Vector probe = point;
  for (Eigen::Index j = 0; j < point.size(); ++j) {
    probe[j] = point[j] + step;
    const Vector fp = field(probe);
    probe[j] = point[j] - step;
    const Vector fm = field(probe);
    probe[j] = point[j];
    if (!fp.allFinite() || !fm.allFinite()) {
      fail(ErrorKind::numeric,
           "field is not finite near the evaluation point (column " + std::to_string(j) + ")");
    }
    J.col(j) = (fp - fm) / (2.0 * step);
  }
  return J;
}

LinearPlant linearize_full(const PathwayModel& model) {
  const int N = model.state_dim();
  const int m = N - 1;
  LinearPlant plant;
  plant.A = Matrix::Zero(N, N);
  plant.Bu = Vector::Zero(N);
  plant.Bd = Vector::Zero(N);
  plant.Cy = RowVector::Zero(N);
  plant.Bd[m] = -1.0;
  plant.Cy[m] = 1.0;

  switch (model.family()) {
    case Family::two_state: {
      const auto& p = model.two_state_params();
      // PFK flux y^a u and PK flux 2kx/(1+y^2g) at x = 1/k, y = 1, u = 1.
      plant.A << -p.k, p.a + p.g,
                 (p.alpha + 1.0) * p.k, -p.alpha * p.a - (p.alpha + 1.0) * p.g;
      plant.Bu << 1.0, -p.alpha;
      break;
    }
    case Family::chain: {
      const auto& p = model.chain_params();
      plant.A(0, m) += p.a;
      for (int i = 1; i < m; ++i) plant.A(i, i - 1) = p.K;
      for (int i = 0; i < m; ++i) plant.A(i, i) = -p.K;
      plant.A(m - 1, m) += p.g;
      plant.A(m, m - 1) = (p.alpha + 1.0) * p.K;
      plant.A(m, m) = -(p.alpha + 1.0) * p.g - p.alpha * p.a;
      plant.Bu[0] = 1.0;
      plant.Bu[m] = -p.alpha;
      break;
    }
    case Family::cyclic: {
      const auto& net = model.cyclic_network();
      const Vector fp = net.decay_slopes();
      const Vector gp = net.output_slopes();
      for (int i = 0; i < m; ++i) {
        plant.A(i, i) = -fp[i];
        if (i > 0) plant.A(i, i - 1) = gp[i - 1];
      }
      plant.A(m, m - 1) = gp[m - 1];
      plant.A(m, m) = -net.sink_slope();
      plant.Bu[0] = 1.0;
      plant.Bu[m] = -net.alpha();
      break;
    }
  }
  return plant;
}

ZeroDynamics zero_dynamics(const PathwayModel& model) {
  ZeroDynamics zd;
  const double alpha = model.alpha();
  const int m = model.state_dim() - 1;
  zd.A = Matrix::Zero(m, m);
  zd.B = Vector::Zero(m);
  zd.C = Vector::Zero(m);
  zd.C[0] = -1.0 / alpha;

  switch (model.family()) {
    case Family::two_state: {
      const auto& p = model.two_state_params();
      zd.A(0, 0) = p.k / alpha;
      zd.B[0] = -(p.g * alpha + p.k) / (alpha * alpha);
      break;
    }
    case Family::chain: {
      const auto& p = model.chain_params();
      const double K = p.K;
      if (m == 1) {
        zd.A(0, 0) = K / alpha;
        zd.B[0] = -(p.g * alpha + K) / (alpha * alpha);
        break;
      }
      // Shifted-cyclic matrix with corner (1 + 1/alpha) K.
      for (int i = 0; i < m; ++i) zd.A(i, i) = -K;
      for (int i = 1; i < m; ++i) zd.A(i, i - 1) = K;
      zd.A(0, m - 1) += (1.0 + 1.0 / alpha) * K;
      zd.B[0] = K / alpha - (alpha + 1.0) / alpha * p.g;
      zd.B[1] += -K / alpha;
      zd.B[m - 1] += p.g;
      break;
    }
    case Family::cyclic: {
      const auto& net = model.cyclic_network();
      const double a = net.a();
      const Vector gp = net.output_slopes();
      const double sink = net.sink_slope();
      if (m == 1) {
        zd.A(0, 0) = -a + gp[0] / alpha;
        zd.B[0] = (a - sink) / alpha - gp[0] / (alpha * alpha);
        break;
      }
      for (int i = 0; i < m; ++i) zd.A(i, i) = -a;
      for (int i = 1; i < m; ++i) zd.A(i, i - 1) = gp[i - 1];
      zd.A(0, m - 1) += gp[m - 1] / alpha;
      zd.B[0] = (a - sink) / alpha;
      zd.B[1] = -gp[0] / alpha;
      break;
    }
  }

  DominantMode mode = mode_structure(model);
  zd.lambda_dom = mode.lambda;
  zd.v_dom = std::move(mode.v);
  zd.spectrum = std::move(mode.spectrum);
  zd.unstable_count = count_unstable(zd.spectrum);
  return zd;
}

DominantMode dominant_mode(const PathwayModel& model) {
  DominantMode mode = mode_structure(model);
  if (model.family() == Family::cyclic && !(mode.lambda > 0.0)) {
    const auto& net = model.cyclic_network();
    fail(ErrorKind::hypothesis_violation,
         "no unstable zero-dynamics mode: r = " + std::to_string(net.r()) +
             " does not exceed a = " + std::to_string(net.a()));
  }
  return mode;
}

Vector zero_coordinates(const PathwayModel& model, const Eigen::Ref<const Vector>& state) {
  require(state.size() == model.state_dim(), ErrorKind::contract_violation,
          "state dimension does not match the model");
  const Vector dev = state - equilibrium(model).state();
  const int m = model.state_dim() - 1;
  Vector zbar = dev.head(m);
  zbar[0] += dev[m] / model.alpha();
  return zbar;
}

Vector state_from_zero_coordinates(const PathwayModel& model, const Eigen::Ref<const Vector>& zbar,
                                   double ybar) {
  const int m = model.state_dim() - 1;
  require(zbar.size() == m, ErrorKind::contract_violation,
          "zero-coordinate vector has the wrong dimension");
  Vector dev(m + 1);
  dev.head(m) = zbar;
  dev[0] -= ybar / model.alpha();
  dev[m] = ybar;
  return equilibrium(model).state() + dev;
}

RowVector natural_feedback_gain(const PathwayModel& model) {
  double h = 0.0;
  switch (model.family()) {
    case Family::two_state: h = model.two_state_params().h; break;
    case Family::chain: h = model.chain_params().h; break;
    case Family::cyclic:
      fail(ErrorKind::unsupported, "cyclic networks have no natural controller");
  }
  // d/dy [2/(1+y^2h)] at y = 1 is -h.
  RowVector gain = RowVector::Zero(model.state_dim());
  gain[model.state_dim() - 1] = h;
  return gain;
}

Matrix closed_loop(const LinearPlant& plant, const Eigen::Ref<const RowVector>& gain) {
  require(gain.size() == plant.A.cols(), ErrorKind::contract_violation,
          "gain dimension does not match the plant");
  return plant.A - plant.Bu * gain;
}

}  // namespace autolim
