#include "autolim/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "autolim/error.hpp"
#include "autolim/linearize.hpp"
#include "autolim/tolerances.hpp"

namespace autolim {
namespace {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

void require_square(const Matrix& A, const char* what) {
  if (A.rows() != A.cols() || A.rows() == 0) {
    fail(ErrorKind::contract_violation, std::string(what) + " must be a non-empty square matrix");
  }
}

Matrix symmetrized(const Matrix& P) { return 0.5 * (P + P.transpose()); }

// Lyapunov solve without the residual bookkeeping; returns nullopt when the
// Kronecker system is numerically singular.
std::optional<Matrix> try_lyapunov(const Matrix& A, const Matrix& Q) {
  const Eigen::Index n = A.rows();
  const Eigen::Index N = n * n;
  const Matrix At = A.transpose();
  Matrix K = Matrix::Zero(N, N);
  // Column-major vec: vec(A'P) = (I kron A') vec P, vec(PA) = (A' kron I) vec P.
  for (Eigen::Index j = 0; j < n; ++j) {
    K.block(j * n, j * n, n, n) += At;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double aij = At(j, i);
      if (aij != 0.0) K.block(j * n, i * n, n, n).diagonal().array() += aij;
    }
  }
  const Eigen::PartialPivLU<Matrix> lu(K);
  // rcond() misses exactly zero pivots, so check the U diagonal as well.
  const Vector pivots = lu.matrixLU().diagonal().cwiseAbs();
  if (!(pivots.minCoeff() > tol::lyapunov_rcond * pivots.maxCoeff())) return std::nullopt;
  if (!(lu.rcond() > tol::lyapunov_rcond)) return std::nullopt;

  const Vector rhs = -Eigen::Map<const Vector>(Q.data(), N);
  Vector x = lu.solve(rhs);
  // One step of iterative refinement.
  x += lu.solve(rhs - K * x);
  if (!x.allFinite()) return std::nullopt;
  return symmetrized(Eigen::Map<const Matrix>(x.data(), n, n));
}

double gain_at(const Matrix& A, const Vector& b, const RowVector& c, double omega) {
  CMatrix M = -A.cast<std::complex<double>>();
  M.diagonal().array() += std::complex<double>(0.0, omega);
  const Eigen::PartialPivLU<CMatrix> lu(M);
  const CVector x = lu.solve(b.cast<std::complex<double>>());
  const std::complex<double> value = c.cast<std::complex<double>>() * x;
  const double g = std::abs(value);
  if (!std::isfinite(g) || !(lu.rcond() > 0.0)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "singular resolvent at omega = %.17g", omega);
    fail(ErrorKind::numeric, buf);
  }
  return g;
}

// Golden-section maximization of f on [lo, hi].
template <typename F>
std::pair<double, double> golden_max(F&& f, double lo, double hi) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int iter = 0; iter < 200; ++iter) {
    if (hi - lo <= tol::hinf_refine_relative * std::max(std::abs(hi), std::abs(lo))) break;
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace

std::vector<std::complex<double>> shifted_power_roots(double a, double r, int n) {
  require(n >= 1, ErrorKind::contract_violation, "root count must be positive");
  std::vector<std::complex<double>> roots;
  roots.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / n;
    // Exact values on the axes keep real roots real.
    double re = std::cos(theta);
    double im = std::sin(theta);
    if (4 * j == n) re = 0.0, im = 1.0;
    if (2 * j == n) re = -1.0, im = 0.0;
    if (4 * j == 3 * n) re = 0.0, im = -1.0;
    roots.emplace_back(r * re - a, r * im);
  }
  return roots;
}

Matrix lyapunov_solve(const Matrix& A, const Matrix& Q) {
  require_square(A, "A");
  require(Q.rows() == A.rows() && Q.cols() == A.cols(), ErrorKind::contract_violation,
          "Q must match the dimension of A");
  auto P = try_lyapunov(A, Q);
  if (!P) {
    fail(ErrorKind::spectrum_degeneracy,
         "Lyapunov operator is singular: A has eigenvalues summing to zero");
  }
  return *P;
}

bool is_hurwitz(const Matrix& A) {
  require_square(A, "A");
  const Eigen::Index n = A.rows();
  const auto X = try_lyapunov(A, Matrix::Identity(n, n));
  if (!X) return false;
  const Matrix res = A.transpose() * *X + *X * A + Matrix::Identity(n, n);
  if (!(res.norm() <= 1e-6 * (1.0 + X->norm()))) return false;
  const Eigen::LLT<Matrix> llt(*X);
  return llt.info() == Eigen::Success;
}

Matrix riccati_residual(const Matrix& A, const Vector& B, const Matrix& Q, double R,
                        const Matrix& P) {
  const Vector PB = P * B;
  return A.transpose() * P + P * A - (PB * PB.transpose()) / R + Q;
}

RowVector lqr_gain(const Vector& B, double R, const Matrix& P) {
  return (B.transpose() * P) / R;
}

namespace {

struct Kleinman {
  Matrix P;
  Matrix res;
  double resnorm = 0.0;
  int iterations = 0;
};

// Newton-Kleinman from a stabilizing gain: first step in gain form, then
// corrections driven by the residual.
Kleinman kleinman(const Matrix& A, const Vector& B, const Matrix& Q, double R,
                  const RowVector& K0) {
  Kleinman k;
  Matrix Acl = A - B * K0;
  k.P = lyapunov_solve(Acl, Q + R * K0.transpose() * K0);
  k.res = riccati_residual(A, B, Q, R, k.P);
  k.resnorm = k.res.norm();
  k.iterations = 1;
  double best = k.resnorm;
  int stalled = 0;
  while (k.resnorm > tol::riccati_stop * (1.0 + k.P.norm()) &&
         k.iterations < tol::riccati_max_iterations) {
    Acl = A - B * lqr_gain(B, R, k.P);
    const auto dP = try_lyapunov(Acl, k.res);
    if (!dP) break;
    const Matrix next = symmetrized(k.P + *dP);
    ++k.iterations;
    if (!next.allFinite()) break;
    k.P = next;
    k.res = riccati_residual(A, B, Q, R, k.P);
    k.resnorm = k.res.norm();
    if (k.resnorm < 0.5 * best) {
      best = k.resnorm;
      stalled = 0;
    } else if (++stalled >= 5) {
      break;
    }
  }
  return k;
}

// Shift continuation: A - sigma I is Hurwitz for sigma > ||A||; the LQR gain
// of each shifted pair seeds the next smaller shift until sigma reaches 0.
RowVector stabilizing_gain(const Matrix& A, const Vector& B) {
  const Eigen::Index n = A.rows();
  const Matrix I = Matrix::Identity(n, n);
  double sigma = A.norm() + 1.0;
  RowVector K = RowVector::Zero(n);
  for (int stage = 0; stage < 200; ++stage) {
    const Kleinman k = kleinman(A - sigma * I, B, I, 1.0, K);
    if (!k.P.allFinite()) break;
    K = lqr_gain(B, 1.0, k.P);
    const Matrix Acl = A - B * K;
    double step = sigma;
    int halvings = 0;
    while (!is_hurwitz(Acl - (sigma - step) * I)) {
      step *= 0.5;
      if (++halvings > 40) {
        fail(ErrorKind::synthesis, "no stabilizing initial gain: (A, B) is not stabilizable");
      }
    }
    sigma -= step;
    if (halvings == 0) return K;
  }
  fail(ErrorKind::synthesis, "no stabilizing initial gain: (A, B) is not stabilizable");
}

}  // namespace

RiccatiSolution riccati_solve(const Matrix& A, const Vector& B, const Matrix& Q, double R,
                              const std::optional<RowVector>& initial_gain) {
  require_square(A, "A");
  const Eigen::Index n = A.rows();
  require(B.size() == n, ErrorKind::contract_violation, "B must match the dimension of A");
  require(Q.rows() == n && Q.cols() == n, ErrorKind::contract_violation,
          "Q must match the dimension of A");
  require(R > 0.0 && std::isfinite(R), ErrorKind::contract_violation, "R must be positive");

  RowVector K0;
  if (initial_gain && initial_gain->size() == n && is_hurwitz(A - B * *initial_gain)) {
    K0 = *initial_gain;
  } else if (is_hurwitz(A)) {
    K0 = RowVector::Zero(n);
  } else {
    K0 = stabilizing_gain(A, B);
  }

  const Kleinman k = kleinman(A, B, Q, R, K0);
  if (!(k.resnorm <= tol::riccati_accept * (1.0 + k.P.norm()))) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "Newton-Kleinman stalled after %d iterations, residual %.3e",
                  k.iterations, k.resnorm);
    fail(ErrorKind::convergence, buf);
  }
  if (!is_hurwitz(A - B * lqr_gain(B, R, k.P))) {
    fail(ErrorKind::synthesis, "Riccati solution is not stabilizing");
  }
  return {k.P, k.iterations, k.resnorm};
}

double cheap_cost(const LinearPlant& plant, double epsilon, const Vector& xbar0) {
  require(epsilon > 0.0 && std::isfinite(epsilon), ErrorKind::contract_violation,
          "epsilon must be positive");
  require(xbar0.size() == plant.A.rows(), ErrorKind::contract_violation,
          "initial deviation has the wrong dimension");
  const Matrix Q = plant.Cy.transpose() * plant.Cy;
  const RiccatiSolution sol = riccati_solve(plant.A, plant.Bu, Q, epsilon * epsilon);
  return 0.5 * xbar0.dot(sol.P * xbar0);
}

double frequency_gain(const Matrix& A, const Vector& b, const RowVector& c, double omega) {
  require_square(A, "A");
  require(b.size() == A.rows() && c.size() == A.rows(), ErrorKind::contract_violation,
          "b and c must match the dimension of A");
  return gain_at(A, b, c, omega);
}

HinfResult hinf_norm(const Matrix& A, const Vector& b, const RowVector& c) {
  require_square(A, "A");
  require(b.size() == A.rows() && c.size() == A.rows(), ErrorKind::contract_violation,
          "b and c must match the dimension of A");
  require(is_hurwitz(A), ErrorKind::precondition, "H-infinity norm requires a stable A");

  const auto f = [&](double w) { return gain_at(A, b, c, w); };
  const double lo = tol::hinf_omega_min;
  double hi = tol::hinf_omega_max;

  for (int extension = 0;; ++extension) {
    const int N = tol::hinf_grid_points;
    const double step = std::log10(hi / lo) / (N - 1);
    // Index 0 is omega = 0, indices 1..N the log grid.
    std::vector<double> omega(N + 1);
    std::vector<double> gain(N + 1);
    omega[0] = 0.0;
    gain[0] = f(0.0);
    std::size_t best = 0;
    for (int i = 0; i < N; ++i) {
      omega[i + 1] = lo * std::pow(10.0, step * i);
      gain[i + 1] = f(omega[i + 1]);
      if (gain[i + 1] > gain[best]) best = static_cast<std::size_t>(i + 1);
    }

    HinfResult result{gain[best], omega[best]};
    if (best > 0) {
      const double left = omega[best - 1];
      const double right = best < static_cast<std::size_t>(N) ? omega[best + 1] : omega[best];
      std::pair<double, double> peak;
      if (left == 0.0) {
        peak = golden_max(f, left, right);
      } else {
        // Refine in log-frequency.
        peak = golden_max([&](double s) { return f(std::exp(s)); }, std::log(left),
                          std::log(right));
        peak.first = std::exp(peak.first);
      }
      if (peak.second > result.norm) result = {peak.second, peak.first};
    }

    // The low end reaches omega = 0 through the grid, so only the high end can
    // truncate a peak.
    if (gain[N] < tol::hinf_endpoint_ratio * result.norm) return result;
    if (extension >= tol::hinf_max_extensions) {
      fail(ErrorKind::numeric, "frequency gain does not decay within the extended sweep range");
    }
    hi *= 10.0;
  }
}

}  // namespace autolim
