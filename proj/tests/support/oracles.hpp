#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's closed forms.

#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "autolim/linearize.hpp"
#include "autolim/model.hpp"

namespace autolim::testing {

inline std::vector<std::complex<double>> eigenvalues(const Matrix& A) {
  Eigen::EigenSolver<Matrix> es(A, false);
  std::vector<std::complex<double>> out(es.eigenvalues().data(),
                                        es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

inline double spectral_abscissa(const Matrix& A) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& s : eigenvalues(A)) best = std::max(best, s.real());
  return best;
}

/// Dominant real eigenvalue of A and its left eigenvector scaled so w[0] = 1.
struct NumericMode {
  double lambda;
  Vector w;
};

inline NumericMode numeric_dominant_left(const Matrix& A) {
  Eigen::EigenSolver<Matrix> es(A.transpose(), true);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()[i].real() > es.eigenvalues()[best].real()) best = i;
  }
  const Eigen::VectorXcd w = es.eigenvectors().col(best) / es.eigenvectors()(0, best);
  return {es.eigenvalues()[best].real(), w.real()};
}

/// Stabilizing Riccati solution from the stable invariant subspace of the
/// Hamiltonian matrix.
inline Matrix hamiltonian_riccati(const Matrix& A, const Vector& B, const Matrix& Q, double R) {
  const Eigen::Index n = A.rows();
  Matrix H(2 * n, 2 * n);
  H << A, -(B * B.transpose()) / R, -Q, -A.transpose();
  Eigen::EigenSolver<Matrix> es(H, true);
  Eigen::MatrixXcd X(2 * n, n);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < 2 * n && col < n; ++i) {
    if (es.eigenvalues()[i].real() < 0.0) X.col(col++) = es.eigenvectors().col(i);
  }
  const Eigen::MatrixXcd X1 = X.topRows(n);
  const Eigen::MatrixXcd X2 = X.bottomRows(n);
  const Matrix P = (X2 * X1.inverse()).real();
  return 0.5 * (P + P.transpose());
}

/// Dense log-grid maximum of |c (jwI - A)^-1 b| with no refinement.
inline double brute_peak_gain(const Matrix& A, const Vector& b, const RowVector& c, double lo,
                              double hi, int points) {
  double best = 0.0;
  const Eigen::MatrixXcd Ac = A.cast<std::complex<double>>();
  for (int i = 0; i <= points; ++i) {
    const double w = i == 0 ? 0.0 : lo * std::pow(hi / lo, double(i - 1) / (points - 1));
    Eigen::MatrixXcd M = -Ac;
    M.diagonal().array() += std::complex<double>(0.0, w);
    const Eigen::VectorXcd x = M.fullPivLu().solve(b.cast<std::complex<double>>());
    best = std::max(best, std::abs((c.cast<std::complex<double>>() * x)(0)));
  }
  return best;
}

inline Matrix natural_loop(const PathwayModel& model) {
  return closed_loop(linearize_full(model), natural_feedback_gain(model));
}

inline double chain_rho(double alpha, int n) { return std::pow((alpha + 1.0) / alpha, 1.0 / n); }

inline double chain_gamma(double alpha, double K, double g, int n) {
  const double rho = chain_rho(alpha, n);
  return 1.0 / ((K + g * alpha * std::pow(rho, n - 1)) * (rho - 1.0));
}

/// Energy limit for a deviation whose weighted zero coordinate is z.
inline double chain_energy(double alpha, double K, double g, int n, double z) {
  const double rho = chain_rho(alpha, n);
  const double d = K + g * alpha * std::pow(rho, n - 1);
  return alpha * alpha * K * z * z / ((rho - 1.0) * d * d);
}

/// Minimum of 1/2 int u^2 stabilizing zdot = lambda z + b u from z0.
inline double scalar_min_energy(double lambda, double b, double z0) {
  const double P = 2.0 * lambda / (b * b);
  return 0.5 * P * z0 * z0;
}

class Sampler {
 public:
  explicit Sampler(unsigned long long seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  TwoStateParams two_state() {
    TwoStateParams p;
    p.alpha = log_uniform(0.25, 8.0);
    p.k = log_uniform(0.1, 10.0);
    p.g = uniform(0.0, 5.0);
    p.a = uniform(0.0, 2.0);
    p.h = p.a + uniform(0.0, 1.0) * (p.k + p.g * (1.0 + p.alpha)) / p.alpha;
    return p;
  }

  ChainParams chain(int n_max) {
    ChainParams p;
    p.alpha = log_uniform(0.25, 8.0);
    p.K = log_uniform(0.1, 10.0);
    p.g = uniform(0.0, 5.0);
    p.a = uniform(0.0, 2.0);
    p.h = uniform(0.0, 4.0);
    p.n = integer(1, n_max);
    return p;
  }

  /// Cyclic network with power-law decay rates of common slope a and linear
  /// transfer rates fixed by the balance equations; r > a when `unstable`.
  CyclicNetwork cyclic(int n_max, bool unstable = true) {
    for (;;) {
      const int n = integer(1, n_max);
      const double alpha = log_uniform(0.25, 4.0);
      const double a = uniform(0.2, 2.0);
      Vector eq(n + 1);
      for (int i = 0; i <= n; ++i) eq[i] = uniform(0.5, 2.0);
      std::vector<RateFunction> f;
      for (int i = 0; i < n; ++i) {
        const double p = uniform(0.5, 2.0);
        f.push_back(RateFunction::power(a / (p * std::pow(eq[i], p - 1.0)), p));
      }
      const RateFunction sink = RateFunction::linear(uniform(0.1, 2.0));
      const double u_star = f[0](eq[0]);
      std::vector<CyclicNode> nodes;
      for (int i = 0; i < n; ++i) {
        const double out = i + 1 < n ? f[i + 1](eq[i + 1]) : sink(eq[n]) + alpha * u_star;
        nodes.push_back({f[i], RateFunction::linear(out / eq[i])});
      }
      CyclicNetwork net(alpha, std::move(nodes), sink, eq);
      // Independent r: geometric mean of the transfer slopes over alpha.
      double prod = 1.0;
      for (const auto& node : net.nodes()) prod *= node.g.coefficient();
      const double r = std::pow(prod / alpha, 1.0 / n);
      if (unstable ? r > 1.05 * a : r < 0.95 * a) return net;
    }
  }

  /// Chain whose natural closed loop is linearly stable, h found by rejection.
  ChainParams stable_chain(int n_max) {
    for (;;) {
      ChainParams p = chain(n_max);
      p.h = p.a + uniform(0.02, 1.2);
      if (spectral_abscissa(natural_loop(PathwayModel::chain(p))) < 0.0) return p;
    }
  }

  /// Ranges with O(1) time constants for simulation runs.
  TwoStateParams moderate_two_state() {
    TwoStateParams p;
    p.alpha = log_uniform(0.5, 4.0);
    p.k = log_uniform(0.5, 5.0);
    p.g = uniform(0.0, 2.0);
    p.a = uniform(0.0, 1.0);
    p.h = p.a + uniform(0.3, 0.7) * (p.k + p.g * (1.0 + p.alpha)) / p.alpha;
    return p;
  }

  /// Natural loop decays at least at rate `decay`.
  ChainParams moderate_chain(int n_max, double decay) {
    for (;;) {
      ChainParams p;
      p.alpha = log_uniform(0.5, 4.0);
      p.K = log_uniform(0.5, 5.0);
      p.g = uniform(0.0, 2.0);
      p.a = uniform(0.0, 1.0);
      p.n = integer(1, n_max);
      for (int attempt = 0; attempt < 100; ++attempt) {
        p.h = p.a + uniform(0.02, 1.2);
        if (spectral_abscissa(natural_loop(PathwayModel::chain(p))) < -decay) return p;
      }
    }
  }

  Vector perturbed_state(const PathwayModel& model, double scale) {
    Vector state = equilibrium(model).state();
    for (Eigen::Index i = 0; i < state.size(); ++i) state[i] *= 1.0 + uniform(-scale, scale);
    return state;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace autolim::testing
