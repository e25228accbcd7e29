#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "autolim/model.hpp"

namespace autolim {

struct LinearPlant;

/// r*exp(2*pi*i*j/n) - a for j = 0..n-1.
std::vector<std::complex<double>> shifted_power_roots(double a, double r, int n);

/// Solves A'P + PA + Q = 0 through the Kronecker system. Throws
/// spectrum_degeneracy when the system is singular.
Matrix lyapunov_solve(const Matrix& A, const Matrix& Q);

/// Lyapunov certificate: A'X + XA + I = 0 has a positive-definite solution.
bool is_hurwitz(const Matrix& A);

struct RiccatiSolution {
  Matrix P;
  int iterations = 0;
  double residual = 0.0;
};

/// A'P + PA - P B R^-1 B' P + Q
Matrix riccati_residual(const Matrix& A, const Vector& B, const Matrix& Q, double R,
                        const Matrix& P);

/// Stabilizing solution by Newton-Kleinman. The initial gain must make A - B*K0
/// Hurwitz; without one, a gain is built by continuation from a shifted A.
RiccatiSolution riccati_solve(const Matrix& A, const Vector& B, const Matrix& Q, double R,
                              const std::optional<RowVector>& initial_gain = std::nullopt);

/// State-feedback gain R^-1 B' P.
RowVector lqr_gain(const Vector& B, double R, const Matrix& P);

/// 1/2 xbar0' P(eps) xbar0 with Q = Cy'Cy and R = eps^2.
double cheap_cost(const LinearPlant& plant, double epsilon, const Vector& xbar0);

struct HinfResult {
  double norm = 0.0;
  double omega_peak = 0.0;
};

/// |c (jwI - A)^-1 b| at one frequency.
double frequency_gain(const Matrix& A, const Vector& b, const RowVector& c, double omega);

/// Peak frequency gain of a stable SISO system by grid sweep and golden-section
/// refinement.
HinfResult hinf_norm(const Matrix& A, const Vector& b, const RowVector& c);

}  // namespace autolim
