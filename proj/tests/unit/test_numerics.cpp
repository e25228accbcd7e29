#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "autolim/error.hpp"
#include "autolim/limits.hpp"
#include "autolim/linearize.hpp"
#include "autolim/numerics.hpp"
#include "oracles.hpp"

namespace autolim {
namespace {

using testing::Sampler;

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix M(rows.size(), rows.begin()->size());
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) M(i, j++) = v;
    ++i;
  }
  return M;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::numeric;
}

TEST(ShiftedPowerRoots, Examples) {
  const auto r1 = shifted_power_roots(1, 2, 2);
  EXPECT_EQ(r1[0], std::complex<double>(1, 0));
  EXPECT_EQ(r1[1], std::complex<double>(-3, 0));
  const auto r2 = shifted_power_roots(0, 1, 4);
  EXPECT_EQ(r2[1], std::complex<double>(0, 1));
  EXPECT_EQ(r2[2], std::complex<double>(-1, 0));
  EXPECT_EQ(r2[3], std::complex<double>(0, -1));
  const auto r3 = shifted_power_roots(1, std::sqrt(2.0), 2);
  EXPECT_NEAR(r3[0].real(), std::sqrt(2.0) - 1, 1e-15);
  EXPECT_NEAR(r3[1].real(), -std::sqrt(2.0) - 1, 1e-15);
}

TEST(ShiftedPowerRoots, SatisfyCharacteristicEquation) {
  for (int n : {1, 3, 7, 16, 41}) {
    for (const auto& s : shifted_power_roots(0.7, 1.9, n)) {
      EXPECT_NEAR(std::abs(std::pow(s + 0.7, n) - std::pow(1.9, n)) / std::pow(1.9, n), 0.0, 1e-12);
    }
  }
  EXPECT_THROW(shifted_power_roots(1, 1, 0), Error);
}

TEST(Lyapunov, Examples) {
  EXPECT_NEAR(lyapunov_solve(mat({{-1}}), mat({{2}}))(0, 0), 1.0, 1e-15);
  const Matrix P = lyapunov_solve(mat({{-1, 0}, {0, -2}}), Matrix::Identity(2, 2));
  EXPECT_LE((P - mat({{0.5, 0}, {0, 0.25}})).norm(), 1e-15);
}

TEST(Lyapunov, SingularOperator) {
  EXPECT_EQ(kind_of([] { lyapunov_solve(mat({{1, 0}, {0, -1}}), Matrix::Identity(2, 2)); }),
            ErrorKind::spectrum_degeneracy);
}

TEST(Lyapunov, ResidualOnStableFamilies) {
  Sampler s(21);
  for (int i = 0; i < 12; ++i) {
    ChainParams p = s.chain(29);
    const PathwayModel model = PathwayModel::chain(p);
    const LinearPlant plant = linearize_full(model);
    // Shift the plant until stable: A - (abscissa + 0.5) I.
    const double shift = testing::spectral_abscissa(plant.A) + 0.5;
    const Eigen::Index n = plant.A.rows();
    const Matrix A = plant.A - shift * Matrix::Identity(n, n);
    Matrix M(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) M(r, c) = s.uniform(-1, 1);
    const Matrix Q = M.transpose() * M;
    const Matrix P = lyapunov_solve(A, Q);
    EXPECT_LE((A.transpose() * P + P * A + Q).norm(), 1e-10 * Q.norm());
  }
}

TEST(Hurwitz, Certificate) {
  EXPECT_TRUE(is_hurwitz(mat({{-1, 5}, {0, -0.1}})));
  EXPECT_FALSE(is_hurwitz(mat({{0.01}})));
  EXPECT_FALSE(is_hurwitz(mat({{0, 1}, {-1, 0}})));
  Sampler s(22);
  for (int i = 0; i < 30; ++i) {
    const PathwayModel model = PathwayModel::chain(s.chain(10));
    const LinearPlant p = linearize_full(model);
    const Matrix A = closed_loop(p, natural_feedback_gain(model));
    const double abscissa = testing::spectral_abscissa(A);
    if (std::abs(abscissa) < 1e-6) continue;
    EXPECT_EQ(is_hurwitz(A), abscissa < 0.0);
  }
}

TEST(Riccati, ScalarExamples) {
  EXPECT_NEAR(riccati_solve(mat({{1}}), Vector::Constant(1, -2), mat({{0}}), 1.0).P(0, 0), 0.5,
              1e-12);
  EXPECT_NEAR(riccati_solve(mat({{-1}}), Vector::Constant(1, 1), mat({{1}}), 1.0).P(0, 0),
              std::sqrt(2.0) - 1.0, 1e-11);
}

TEST(Riccati, UnstabilizablePair) {
  EXPECT_EQ(kind_of([] { riccati_solve(mat({{1}}), Vector::Zero(1), mat({{1}}), 1.0); }),
            ErrorKind::synthesis);
}

TEST(Riccati, InvalidWeight) {
  EXPECT_EQ(kind_of([] { riccati_solve(mat({{1}}), Vector::Ones(1), mat({{1}}), 0.0); }),
            ErrorKind::contract_violation);
}

TEST(Riccati, MatchesHamiltonianSubspace) {
  Sampler s(23);
  for (int i = 0; i < 30; ++i) {
    const PathwayModel model = i % 2 ? PathwayModel::chain(s.chain(8))
                                     : PathwayModel::two_state(s.two_state());
    const LinearPlant p = linearize_full(model);
    const Eigen::Index n = p.A.rows();
    const Matrix Q = p.Cy.transpose() * p.Cy + 0.3 * Matrix::Identity(n, n);
    const double R = s.log_uniform(0.01, 1.0);
    const RiccatiSolution sol = riccati_solve(p.A, p.Bu, Q, R);
    const Matrix ref = testing::hamiltonian_riccati(p.A, p.Bu, Q, R);
    EXPECT_LE((sol.P - ref).norm(), 1e-7 * (1.0 + ref.norm()));
    EXPECT_LE(riccati_residual(p.A, p.Bu, Q, R, sol.P).norm(), 1e-11 * (1.0 + sol.P.norm()));
    EXPECT_LT(testing::spectral_abscissa(p.A - p.Bu * lqr_gain(p.Bu, R, sol.P)), 0.0);
  }
}

TEST(Riccati, LongChainsNeedNoSuppliedGain) {
  for (int n : {12, 20}) {
    const PathwayModel model = PathwayModel::chain({0.5, 2.0, 1.5, 0.5, 0.5, n});
    const LinearPlant p = linearize_full(model);
    const Matrix Q = p.Cy.transpose() * p.Cy;
    const RiccatiSolution sol = riccati_solve(p.A, p.Bu, Q, 1.0);
    EXPECT_LT(testing::spectral_abscissa(p.A - p.Bu * lqr_gain(p.Bu, 1.0, sol.P)), 0.0) << n;
  }
}

TEST(Riccati, MinimumEnergyOnZeroDynamics) {
  Sampler s(24);
  for (int i = 0; i < 30; ++i) {
    const PathwayModel model = i % 3 == 2 ? PathwayModel::cyclic(s.cyclic(6))
                                          : PathwayModel::chain(s.chain(10));
    const ZeroDynamics zd = zero_dynamics(model);
    const Eigen::Index m = zd.A.rows();
    const RiccatiSolution sol =
        riccati_solve(zd.A, zd.B, Matrix::Zero(m, m), 1.0, dominant_mode_gain(zd));
    // Scalar minimum-energy Riccati of the dominant mode: p = 2 lambda / (v'B)^2.
    const double vB = zd.v_dom.dot(zd.B);
    const double p_scalar = 2.0 * zd.lambda_dom / (vB * vB);
    for (int k = 0; k < 5; ++k) {
      Vector z(m);
      for (Eigen::Index j = 0; j < m; ++j) z[j] = s.uniform(-1, 1);
      const double cost = 0.5 * z.dot(sol.P * z);
      const double vz = zd.v_dom.dot(z);
      const double oracle = 0.5 * p_scalar * vz * vz;
      EXPECT_GE(cost, oracle - 1e-9 * std::max(1.0, oracle));
      if (zd.unstable_count == 1) EXPECT_NEAR(cost, oracle, 1e-6 * std::max(oracle, 1e-12));
    }
  }
}

TEST(CheapCost, ConvergesToEnergyLimitFromAbove) {
  const PathwayModel model = PathwayModel::two_state({1, 1, 1, 0, 1});
  const LinearPlant p = linearize_full(model);
  const Vector xbar = Eigen::Vector2d(1, 0);
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double c = cheap_cost(p, eps, xbar);
    EXPECT_LE(c, prev);
    prev = c;
  }
  EXPECT_GE(prev, 0.25);
  EXPECT_LE(prev, 0.25 * 1.01);
  EXPECT_EQ(cheap_cost(p, 1e-2, Vector::Zero(2)), 0.0);
}

TEST(CheapCost, ExcessScalesLinearlyInEpsilon) {
  // The excess over the limit shrinks tenfold per decade of epsilon.
  const PathwayModel model = PathwayModel::two_state({0.5, 2.0, 0.5, 0, 1});
  const LinearPlant p = linearize_full(model);
  const Vector xbar = Eigen::Vector2d(0.3, 0);
  const double H = energy_closed_form(model, Vector::Constant(1, 0.5 + 0.3), 1.0).H;
  const double e3 = cheap_cost(p, 1e-3, xbar) / H - 1.0;
  const double e4 = cheap_cost(p, 1e-4, xbar) / H - 1.0;
  EXPECT_GT(e4, 0.0);
  EXPECT_NEAR(e3 / e4, 10.0, 0.2);
}

TEST(Hinf, FirstOrderLag) {
  const HinfResult r = hinf_norm(mat({{-1}}), Vector::Ones(1), RowVector::Ones(1));
  EXPECT_NEAR(r.norm, 1.0, 1e-12);
  EXPECT_EQ(r.omega_peak, 0.0);
}

TEST(Hinf, LightlyDampedOscillator) {
  const double d = 0.1;
  const HinfResult r = hinf_norm(mat({{0, 1}, {-1, -d}}), Eigen::Vector2d(0, 1),
                                 Eigen::RowVector2d(1, 0));
  EXPECT_NEAR(r.norm, 1.0 / (d * std::sqrt(1.0 - d * d / 4.0)), 1e-6);
  EXPECT_NEAR(r.omega_peak, std::sqrt(1.0 - d * d / 2.0), 1e-4);
}

TEST(Hinf, UnstableRejected) {
  EXPECT_EQ(kind_of([] { hinf_norm(mat({{0.5}}), Vector::Ones(1), RowVector::Ones(1)); }),
            ErrorKind::precondition);
}

TEST(Hinf, HighFrequencyPeakBeyondDefaultRange) {
  // Resonance at omega = 3e4 needs the upper end to extend.
  const double w0 = 3e4;
  const double d = 0.05;
  const HinfResult r = hinf_norm(mat({{0, 1}, {-w0 * w0, -d * w0}}), Eigen::Vector2d(0, 1),
                                 Eigen::RowVector2d(w0 * w0, 0));
  EXPECT_NEAR(r.norm, 1.0 / (d * std::sqrt(1.0 - d * d / 4.0)), 1e-5);
}

TEST(Hinf, AgreesWithDenseGridAndTranspose) {
  Sampler s(25);
  for (int i = 0; i < 15; ++i) {
    TwoStateParams p = s.two_state();
    p.h = p.a + 0.5 * (p.k + p.g * (1 + p.alpha)) / p.alpha;
    const PathwayModel model = PathwayModel::two_state(p);
    const LinearPlant plant = linearize_full(model);
    const Matrix A = closed_loop(plant, natural_feedback_gain(model));
    const HinfResult r = hinf_norm(A, plant.Bd, plant.Cy);
    const double brute = testing::brute_peak_gain(A, plant.Bd, plant.Cy, 1e-4, 1e4, 20000);
    EXPECT_GE(r.norm, brute * (1.0 - 1e-9));
    EXPECT_LE(r.norm, brute * (1.0 + 1e-3));
    const HinfResult t = hinf_norm(A.transpose(), plant.Cy.transpose(), plant.Bd.transpose());
    EXPECT_NEAR(t.norm, r.norm, 1e-9 * r.norm);
    EXPECT_NEAR(frequency_gain(A, plant.Bd, plant.Cy, r.omega_peak), r.norm, 1e-12 * r.norm);
  }
}

}  // namespace
}  // namespace autolim
