#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/LU>

#include "autolim/error.hpp"
#include "autolim/limits.hpp"
#include "autolim/linearize.hpp"
#include "autolim/numerics.hpp"
#include "autolim/sim.hpp"
#include "autolim/tolerances.hpp"
#include "cases.hpp"

namespace autolim::cli {
namespace {

struct Context {
  double scale = 1.0;
  bool fault_gamma = false;
};

class Tally {
 public:
  Tally(SuiteResult& result, double tolerance) : result_(result) { result_.tolerance = tolerance; }

  void observe(double discrepancy, const std::string& label) {
    ++result_.cases;
    const double d = std::isnan(discrepancy) ? std::numeric_limits<double>::infinity()
                                             : std::abs(discrepancy);
    if (d > result_.max_discrepancy) result_.max_discrepancy = d;
    if (!(d <= result_.tolerance)) flag(label);
  }

  void check(bool ok, const std::string& label) {
    ++result_.cases;
    if (!ok) flag(label);
  }

 private:
  void flag(const std::string& label) {
    if (result_.passed) result_.detail = "first failure: " + label;
    result_.passed = false;
  }

  SuiteResult& result_;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string describe(const PathwayModel& model) {
  switch (model.family()) {
    case Family::two_state: {
      const auto& p = model.two_state_params();
      return "two_state(alpha=" + num(p.alpha) + ", k=" + num(p.k) + ", g=" + num(p.g) +
             ", h=" + num(p.h) + ", a=" + num(p.a) + ")";
    }
    case Family::chain: {
      const auto& p = model.chain_params();
      return "chain(alpha=" + num(p.alpha) + ", K=" + num(p.K) + ", g=" + num(p.g) +
             ", h=" + num(p.h) + ", a=" + num(p.a) + ", n=" + std::to_string(p.n) + ")";
    }
    case Family::cyclic: {
      const auto& net = model.cyclic_network();
      return "cyclic(n=" + std::to_string(net.n()) + ", alpha=" + num(net.alpha()) +
             ", a=" + num(net.a()) + ", r=" + num(net.r()) + ")";
    }
  }
  return "model";
}

double gamma_closed(const Context& ctx, const PathwayModel& model) {
  const double gamma = gamma_closed_form(model);
  return ctx.fault_gamma ? gamma * (1.0 + 1e-6) : gamma;
}

std::vector<PathwayModel> random_models(CaseGenerator& gen, int per_family, int chain_n,
                                        int cyclic_n) {
  std::vector<PathwayModel> models;
  for (int i = 0; i < per_family; ++i) models.push_back(PathwayModel::two_state(gen.two_state()));
  for (int i = 0; i < per_family; ++i) models.push_back(PathwayModel::chain(gen.chain(chain_n)));
  for (int i = 0; i < per_family; ++i) models.push_back(PathwayModel::cyclic(gen.cyclic(cyclic_n)));
  return models;
}

Matrix random_spd(CaseGenerator& gen, Eigen::Index n) {
  Matrix M(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) M(i, j) = gen.uniform(-1.0, 1.0);
  return M.transpose() * M + Matrix::Identity(n, n);
}

RowVector lqr(const LinearPlant& plant, const Matrix& Q, double R) {
  return lqr_gain(plant.Bu, R, riccati_solve(plant.A, plant.Bu, Q, R).P);
}

// --- model ------------------------------------------------------------------

void model_equilibrium(CaseGenerator& gen, const Context& ctx, SuiteResult& out) {
  Tally t(out, tol::equilibrium_residual * ctx.scale);
  for (const auto& model : random_models(gen, 20, 25, 6)) {
    const Equilibrium eq = equilibrium(model);
    const Vector f = vector_field(model, eq.state(), eq.u_star, 0.0);
    t.observe(f.lpNorm<Eigen::Infinity>(), describe(model));
  }
}

void model_control_affine(CaseGenerator& gen, const Context& ctx, SuiteResult& out) {
  Tally t(out, 1e-12 * ctx.scale);
  for (const auto& model : random_models(gen, 20, 25, 6)) {
    const Vector x = gen.perturbed_state(model, 0.5);
    const double d = gen.uniform(-0.5, 0.5);
    const Vector f0 = vector_field(model, x, 0.0, d);
    const Vector f1 = vector_field(model, x, 1.0, d);
    const Vector f2 = vector_field(model, x, 2.0, d);
    const double scale = 1.0 + f1.lpNorm<Eigen::Infinity>() + f0.lpNorm<Eigen::Infinity>();
    t.observe((f2 - f0 - 2.0 * (f1 - f0)).lpNorm<Eigen::Infinity>() / scale, describe(model));
  }
}

void model_z_drift(CaseGenerator& gen, const Context& ctx, SuiteResult& out) {
  Tally t(out, 1e-12 * ctx.scale);
  for (int i = 0; i < 40; ++i) {
    const PathwayModel model = i % 2 ? PathwayModel::chain(gen.chain(25))
                                     : PathwayModel::two_state(gen.two_state());
    const int m = model.state_dim() - 1;
    const Vector x = gen.perturbed_state(model, 0.5);
    const Vector f0 = vector_field(model, x, 0.0, 0.0);
    const Vector f1 = vector_field(model, x, 1.0, 0.0);
    const double dz0 = f0[0] + f0[m] / model.alpha();
    const double dz1 = f1[0] + f1[m] / model.alpha();
    t.observe((dz1 - dz0) / (1.0 + std::abs(f1[0]) + std::abs(f1[m])), describe(model));
  }
}

void model_disturbance_channel(CaseGenerator& gen, const Context& ctx, SuiteResult& out) {
  Tally t(out, 1e-12 * ctx.scale);
  for (const auto& model : random_models(gen, 10, 25, 6)) {
    const Vector x = gen.perturbed_state(model, 0.5);
    Vector diff = vector_field(model, x, 1.0, 1.0) - vector_field(model, x, 1.0, 0.0);
    diff[diff.size() - 1] += 1.0;
    t.observe(diff.lpNorm<Eigen::Infinity>(), describe(model));
  }
}

// --- linearize --------------------------------------------------------------

void linearize_left_eigenvector(CaseGenerator& gen, const Context& ctx, SuiteResult& out) {
  Tally t(out, 1e-9 * ctx.scale);
  std::vector<PathwayModel> models;
  for (int i = 0; i < 60; ++i) models.push_back(PathwayModel::chain(gen.chain(40)));
  for (int i = 0; i < 20; ++i) models.push_back(PathwayModel::two_state(gen.two_state()));
  for (int i = 0; i < 30; ++i) models.push_back(PathwayModel::cyclic(gen.cyclic(8)));
  for (const auto& model : models) {
    const ZeroDynamics zd = zero_dynamics(model);
    const RowVector res = zd.v_dom.transpose() * zd.A - zd.lambda_dom * zd.v_dom.transpose();
    t.observe(res.lpNorm<Eigen::Infinity>(), describe(model));
    t.check(zd.v_dom[0] == 1.0, describe(model) + " v[0] != 1");
  }
}

void linearize_spectrum(CaseGenerator& gen, const Context& ctx, SuiteResult& out) {
  Tally t(out, 1e-8 * ctx.scale);
  for (int i = 0; i < 80; ++i) {
    const PathwayModel model =
        i % 4 == 3 ? PathwayModel::cyclic(gen.cyclic(8)) : PathwayModel::chain(gen.chain(40));
    const ZeroDynamics zd = zero_dynamics(model);
    double shift = 0.0;
    double radius = 0.0;
    if (model.family() == Family::chain) {
      const auto& p = model.chain_params();
      shift = p.K;
      radius = p.K * std::pow((p.alpha + 1.0) / p.alpha, 1.0 / p.n);
    } else {
      shift = model.cyclic_network().a();
      radius = model.cyclic_network().r();
    }
    const int n = static_cast<int>(zd.spectrum.size());
    int unstable = 0;
    for (int j = 0; j < n; ++j) {
      const std::complex<double> s = zd.spectrum[j];
      const double rn = std::pow(radius, n);
      t.observe(std::abs(std::pow(s + shift, n) - rn) / rn, describe(model) + " root residual");
      if (j == 0) {
        t.check(s.real() == zd.lambda_dom, describe(model) + " j=0 is not the dominant root");
      } else {
        t.check(s.real() < zd.lambda_dom, describe(model) + " dominance");
      }
      if (s.real() > 0.0) ++unstable;
    }
    t.check(unstable == zd.unstable_count, describe(model) + " unstable_count");
    t.check(zd.unstable_count >= 1, describe(model) + " has no unstable mode");
  }
}

void linearize_fd_consistency(CaseGenerator& gen, const Context& ctx, SuiteResult& out) {
  Tally t(out, 1e-6 * ctx.scale);
  for (const auto& model : random_models(gen, 15, 10, 6)) {
    const Equilibrium eq = equilibrium(model);
    const Vector xs = eq.state();
    const int N = model.state_dim();
    const int m = N - 1;
    const LinearPlant plant = linearize_full(model);
    const Matrix J = jacobian_fd(
        [&](const Vector& x) { return vector_field(model, x, eq.u_star, 0.0); }, xs);
    const double h = tol::jacobian_fd_step;
    const Vector Bu = (vector_field(model, xs, eq.u_star + h, 0.0) -
                       vector_field(model, xs, eq.u_star - h, 0.0)) / (2.0 * h);
    const Vector Bd =
        (vector_field(model, xs, eq.u_star, h) - vector_field(model, xs, eq.u_star, -h)) / (2.0 * h);
    const double scale = 1.0 + plant.A.lpNorm<Eigen::Infinity>();
    t.observe((J - plant.A).lpNorm<Eigen::Infinity>() / scale, describe(model) + " A");
    t.observe((Bu - plant.Bu).lpNorm<Eigen::Infinity>() / scale, describe(model) + " Bu");
    t.observe((Bd - plant.Bd).lpNorm<Eigen::Infinity>() / scale, describe(model) + " Bd");

    // Change of coordinates w = T xbar with w_1 = x1bar + ybar/alpha.
    Matrix T = Matrix::Identity(N, N);
    T(0, m) = 1.0 / model.alpha();
    const Matrix Aw = T * J * T.inverse();
    const ZeroDynamics zd = zero_dynamics(model);
    t.observe((Aw.topLeftCorner(m, m) - zd.A).lpNorm<Eigen::Infinity>() / scale,
              describe(model) + " zero-dynamics A");
    t.observe((Aw.block(0, m, m, 1) - zd.B).lpNorm<Eigen::Infinity>() / scale,
              describe(model) + " zero-dynamics B");
    t.observe(((T * Bd).head(m) - zd.C).lpNorm<Eigen::Infinity>() / scale,
              describe(model) + " zero-dynamics C");
    t.observe((T * Bu).head(m).lpNorm<Eigen::Infinity>() / scale,
              describe(model) + " control enters zero dynamics");
  }
}

void linearize_scalar_reduction(CaseGenerator& gen, const Context& ctx, SuiteResult& out) {
  Tally t(out, 1e-12 * ctx.scale);
  for (int i = 0; i < 30; ++i) {
    TwoStateParams p = gen.two_state();
    const ZeroDynamics a = zero_dynamics(PathwayModel::two_state(p));
    const ZeroDynamics b = zero_dynamics(PathwayModel::chain({p.alpha, p.k, p.g, p.h, p.a, 1}));
    const double d = std::max({std::abs(a.A(0, 0) - b.A(0, 0)), std::abs(a.B[0] - b.B[0]),
                               std::abs(a.C[0] - b.C[0]), std::abs(a.lambda_dom - b.lambda_dom)});
    t.observe(d, describe(PathwayModel::two_state(p)));
  }
}

// --- limits -----------------------------------------------------------------

void limits_gamma_oracle(CaseGenerator& gen, const Context& ctx, SuiteResult& out) {
  Tally t(out, 1e-9 * ctx.scale);
  for (const auto& model : random_models(gen, 200, 25, 6)) {
    const double closed = gamma_closed(ctx, model);
    const double oracle = gamma_dominant_oracle(zero_dynamics(model));
    t.observe(relative_discrepancy(closed, oracle), describe(model));
  }
}

void limits_energy_oracle(CaseGenerator& gen, const Context& ctx, SuiteResult& out) {
  Tally t(out, 1e-9 * ctx.scale);
  for (int i = 0; i < 400; ++i) {
    const PathwayModel model = i % 2 ? PathwayModel::chain(gen.chain(25))
                                     : PathwayModel::two_state(gen.two_state());
    const int m = model.state_dim() - 1;
    const ZeroDynamics zd = zero_dynamics(model);
    // Deviation along v in zero coordinates with a random output offset.
    const Vector zbar = gen.uniform(0.1, 1.0) * zd.v_dom / zd.v_dom.squaredNorm();
    const Vector x0 = state_from_zero_coordinates(model, zbar, gen.uniform(-0.2, 0.2));
    if ((x0.array() < 0.0).any()) continue;
    const EnergyLimit H = energy_closed_form(model, x0.head(m), x0[m]);
    const double oracle = energy_oracle(zd, zero_coordinates(model, x0));
    t.observe(relative_discrepancy(H.H, oracle), describe(model));

    const Vector xs = equilibrium(model).state();
    const EnergyLimit H0 = energy_closed_form(model, xs.head(m), xs[m]);
    t.check(H0.H == 0.0 && H0.z_tilde0 == 0.0, describe(model) + " H at equilibrium");
  }
}

void limits_reduction(CaseGenerator& gen, const Context& ctx, SuiteResult& out) {
  Tally t(out, 1e-12 * ctx.scale);
  for (int i = 0; i < 50; ++i) {
    const TwoStateParams p = gen.two_state();
    const PathwayModel two = PathwayModel::two_state(p);
    const PathwayModel one = PathwayModel::chain({p.alpha, p.k, p.g, p.h, p.a, 1});
    t.observe(relative_discrepancy(gamma_closed(ctx, two), gamma_closed_form(one)),
              describe(two) + " gamma");
    t.observe(relative_discrepancy(energy_coefficient(two), energy_coefficient(one)),
              describe(two) + " energy coefficient");
  }
  const PathwayModel exact = PathwayModel::chain({1.0, 1.0, 1.0, 0.0, 0.0, 2});
  t.observe(std::abs(gamma_closed(ctx, exact) - 1.0), "chain(alpha=1, K=1, g=1, n=2) gamma = 1");
}

void limits_monotonicity(CaseGenerator& gen, const Context& ctx, SuiteResult& out) {
  Tally t(out, 0.0);
  for (int i = 0; i < 20; ++i) {
    TwoStateParams p = gen.two_state();
    double prev = 0.0;
    for (int j = 0; j <= 15; ++j) {
      p.alpha = 0.25 * std::pow(32.0, j / 15.0);
      const double gamma = gamma_closed(ctx, PathwayModel::two_state(p));
      t.check(gamma > prev, describe(PathwayModel::two_state(p)) + " not increasing in alpha");
      prev = gamma;
    }
  }
  for (int i = 0; i < 20; ++i) {
    ChainParams p = gen.chain(1);
    double prev = 0.0;
    for (int n = 1; n <= 40; ++n) {
      p.n = n;
      const double gamma = gamma_closed(ctx, PathwayModel::chain(p));
      t.check(gamma > prev, describe(PathwayModel::chain(p)) + " not increasing in n");
      prev = gamma;
    }
  }
}

void limits_large_n(CaseGenerator&, const Context& ctx, SuiteResult& out) {
  Tally t(out, 0.02 * ctx.scale);
  for (double alpha : {0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0}) {
    for (int n : {20, 25, 30, 40, 50}) {
      const ChainParams p{alpha, 1.0, 1.0, 0.0, 0.0, n};
      const double exact = gamma_closed(ctx, PathwayModel::chain(p));
      t.observe(relative_discrepancy(exact, approximations(p).gamma_approx),
                describe(PathwayModel::chain(p)));
    }
    const double ratio = gamma_closed(ctx, PathwayModel::chain({alpha, 1.0, 1.0, 0.0, 0.0, 40})) /
                         gamma_closed(ctx, PathwayModel::chain({alpha, 1.0, 1.0, 0.0, 0.0, 20}));
    t.check(ratio >= 1.9 && ratio <= 2.1, "gamma(40)/gamma(20) = " + num(ratio));
  }
}

void limits_cyclic_examples(CaseGenerator&, const Context& ctx, SuiteResult& out) {
  Tally t(out, 1e-12 * ctx.scale);
  const double grid[] = {0.5, 1.0, 2.0, 3.0, 4.0};
  for (double alpha : grid) {
    for (double k : grid) {
      for (double k_y : grid) {
        const PathwayModel ex2 = PathwayModel::cyclic(linear_consumption_network(alpha, k, k_y));
        t.observe(relative_discrepancy(alpha / (k + alpha * k_y), gamma_closed(ctx, ex2)),
                  describe(ex2) + " k_y=" + num(k_y));
      }
      const PathwayModel ex1 =
          PathwayModel::cyclic(cyclic_view(PathwayModel::two_state({alpha, k, 0.0, 0.0, 0.0})));
      t.observe(relative_discrepancy(alpha / k, gamma_closed(ctx, ex1)), describe(ex1));
    }
  }
}

void limits_hypothesis(CaseGenerator& gen, const Context&, SuiteResult& out) {
  Tally t(out, 0.0);
  for (int i = 0; i < 20; ++i) {
    const PathwayModel model = PathwayModel::cyclic(gen.cyclic_without_unstable_mode(6));
    bool raised = false;
    try {
      gamma_closed_form(model);
    } catch (const Error& e) {
      raised = e.kind() == ErrorKind::hypothesis_violation;
    }
    t.check(raised, describe(model) + " r <= a accepted");
  }
}

// --- numerics ---------------------------------------------------------------

void numerics_lyapunov(CaseGenerator& gen, const Context& ctx, SuiteResult& out) {
  Tally t(out, tol::lyapunov_residual * ctx.scale);
  for (int i = 0; i < 20; ++i) {
    Matrix A;
    if (i % 2) {
      const ZeroDynamics zd = zero_dynamics(PathwayModel::chain(gen.chain(30)));
      A = zd.A - (zd.lambda_dom + gen.uniform(0.1, 1.0)) * Matrix::Identity(zd.A.rows(), zd.A.cols());
    } else {
      const PathwayModel model = PathwayModel::chain(gen.stable_chain(12));
      A = closed_loop(linearize_full(model), natural_feedback_gain(model));
    }
    const Matrix Q = random_spd(gen, A.rows());
    const Matrix P = lyapunov_solve(A, Q);
    t.observe((A.transpose() * P + P * A + Q).norm() / Q.norm(),
              "stable matrix of dimension " + std::to_string(A.rows()));
  }
}

void numerics_riccati(CaseGenerator& gen, const Context& ctx, SuiteResult& out) {
  Tally t(out, tol::riccati_stop * ctx.scale);
  for (const auto& model : random_models(gen, 10, 8, 6)) {
    const LinearPlant plant = linearize_full(model);
    const Eigen::Index N = plant.A.rows();
    const Matrix Q = plant.Cy.transpose() * plant.Cy + gen.uniform(0.0, 1.0) * Matrix::Identity(N, N);
    const double R = gen.log_uniform(0.01, 1.0);
    const RiccatiSolution sol = riccati_solve(plant.A, plant.Bu, Q, R);
    t.observe(sol.residual / (1.0 + sol.P.norm()), describe(model));
    t.check((sol.P - sol.P.transpose()).norm() <= tol::symmetry * (1.0 + sol.P.norm()),
            describe(model) + " P not symmetric");
    t.check(is_hurwitz(plant.A - plant.Bu * lqr_gain(plant.Bu, R, sol.P)),
            describe(model) + " closed loop not stable");
  }
}

void numerics_min_energy(CaseGenerator& gen, const Context& ctx, SuiteResult& out) {
  Tally t(out, 1e-6 * ctx.scale);
  for (int i = 0; i < 30; ++i) {
    const PathwayModel model = i % 3 == 2 ? PathwayModel::cyclic(gen.cyclic(6))
                                          : PathwayModel::chain(gen.chain(10));
    const ZeroDynamics zd = zero_dynamics(model);
    const Eigen::Index m = zd.A.rows();
    const RiccatiSolution sol =
        riccati_solve(zd.A, zd.B, Matrix::Zero(m, m), 1.0, dominant_mode_gain(zd));
    for (int s = 0; s < 5; ++s) {
      Vector z(m);
      for (Eigen::Index j = 0; j < m; ++j) z[j] = gen.uniform(-1.0, 1.0);
      if (s == 0) z = zd.v_dom;
      const double cost = 0.5 * z.dot(sol.P * z);
      const double oracle = energy_oracle(zd, z);
      t.check(cost >= oracle - 1e-9 * std::max(1.0, oracle), describe(model) + " min-energy cost below the oracle");
      if (zd.unstable_count == 1) t.observe(relative_discrepancy(oracle, cost), describe(model));
    }
  }
}

void numerics_cheap_control(CaseGenerator& gen, const Context& ctx, SuiteResult& out) {
  Tally t(out, 0.01 * ctx.scale);
  for (int i = 0; i < 20; ++i) {
    // The O(eps) excess scales like 2k/alpha^2, so extreme corners of the
    // sampling box need eps well below 1e-4.
    const PathwayModel model = i % 2 ? PathwayModel::chain(gen.moderate_chain(6, 0.0))
                                     : PathwayModel::two_state(gen.moderate_two_state());
    if (zero_dynamics(model).unstable_count != 1) continue;
    const int m = model.state_dim() - 1;
    const LinearPlant plant = linearize_full(model);
    Vector xbar = Vector::Zero(m + 1);
    xbar[0] = 0.5 * equilibrium(model).x_star[0];
    const Vector x0 = equilibrium(model).state() + xbar;
    const double H = energy_closed_form(model, x0.head(m), x0[m]).H;
    double prev = std::numeric_limits<double>::infinity();
    double last = 0.0;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
      last = cheap_cost(plant, eps, xbar);
      t.check(last <= prev * (1.0 + 1e-12), describe(model) + " cheap cost increased at eps=" + num(eps));
      prev = last;
    }
    t.check(last >= H * (1.0 - 1e-9), describe(model) + " cheap cost below H");
    t.observe(last / H - 1.0, describe(model));
  }
}

void numerics_hinf_symmetry(CaseGenerator& gen, const Context& ctx, SuiteResult& out) {
  Tally t(out, 1e-9 * ctx.scale);
  for (int i = 0; i < 20; ++i) {
    const PathwayModel model = i % 2 ? PathwayModel::chain(gen.stable_chain(8))
                                     : PathwayModel::two_state(gen.two_state());
    const LinearPlant plant = linearize_full(model);
    const Matrix A = closed_loop(plant, natural_feedback_gain(model));
    const HinfResult a = hinf_norm(A, plant.Bd, plant.Cy);
    const HinfResult b = hinf_norm(A.transpose(), plant.Cy.transpose(), plant.Bd.transpose());
    t.observe(relative_discrepancy(a.norm, b.norm), describe(model));
  }
}

// --- sim --------------------------------------------------------------------

void sim_gain_lower_bound(CaseGenerator& gen, const Context& ctx, SuiteResult& out) {
  Tally t(out, 0.0);
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 50; ++i) {
    PathwayModel model = PathwayModel::two_state(gen.two_state());
    if (i % 5 == 1 || i % 5 == 3) model = PathwayModel::chain(gen.stable_chain(8));
    if (i % 5 == 4) model = PathwayModel::cyclic(gen.cyclic(6));
    const LinearPlant plant = linearize_full(model);
    const Eigen::Index N = plant.A.rows();
    const double gamma = gamma_closed(ctx, model);
    std::vector<std::pair<std::string, RowVector>> gains;
    if (model.family() != Family::cyclic) gains.emplace_back("natural", natural_feedback_gain(model));
    gains.emplace_back("lqr(Q=C'C, R=1)", lqr(plant, plant.Cy.transpose() * plant.Cy, 1.0));
    gains.emplace_back("lqr(Q=I, R=0.1)", lqr(plant, Matrix::Identity(N, N), 0.1));
    for (const auto& [name, gain] : gains) {
      const HinfResult norm = hinf_norm(closed_loop(plant, gain), plant.Bd, plant.Cy);
      worst = std::min(worst, norm.norm / gamma);
      t.observe(std::max(0.0, (gamma - norm.norm) / gamma), describe(model) + " " + name);
    }
  }
  if (out.passed) out.detail = "min hinf/gamma = " + num(worst);
}

void sim_energy_lower_bound(CaseGenerator& gen, const Context&, SuiteResult& out) {
  Tally t(out, 0.0);
  double worst = std::numeric_limits<double>::infinity();
  int redrawn = 0;
  for (int i = 0; i < 40; ++i) {
    const PathwayModel model = i % 2 ? PathwayModel::chain(gen.moderate_chain(10, 0.05))
                                     : PathwayModel::two_state(gen.moderate_two_state());
    const int m = model.state_dim() - 1;
    const LinearPlant plant = linearize_full(model);
    const Matrix Q = plant.Cy.transpose() * plant.Cy;
    const std::pair<std::string, ControllerSpec> controllers[] = {
        {"natural", NaturalController{}},
        {"lqr(R=1)", LinearStateFeedback{lqr(plant, Q, 1.0), 0.0}},
        {"lqr(R=0.01)", LinearStateFeedback{lqr(plant, Q, 0.01), 0.0}}};

    // Large deviations can drain y to zero; such starts leave the model's
    // domain and are redrawn.
    for (int attempt = 0;; ++attempt) {
      Vector x0;
      EnergyLimit H;
      do {
        x0 = gen.perturbed_state(model, 0.2);
        H = energy_closed_form(model, x0.head(m), x0[m]);
      } while (std::abs(H.z_tilde0) < 1e-3);
      std::vector<double> ratios;
      try {
        for (const auto& [name, controller] : controllers) {
          ratios.push_back(energy_run(model, controller, x0).trajectory.l2_y_dev / H.H);
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::positivity || attempt >= 20) throw;
        ++redrawn;
        continue;
      }
      for (std::size_t c = 0; c < ratios.size(); ++c) {
        worst = std::min(worst, ratios[c]);
        t.observe(std::max(0.0, 0.95 - ratios[c]), describe(model) + " " + controllers[c].first);
      }
      break;
    }
  }
  if (out.passed) {
    out.detail = "min energy/H = " + num(worst) + ", redrawn starts = " + std::to_string(redrawn);
  }
}

void sim_boundary_probe(CaseGenerator& gen, const Context& ctx, SuiteResult& out) {
  Tally t(out, 0.05 * ctx.scale);
  for (int i = 0; i < 10; ++i) {
    const TwoStateParams p = gen.two_state();
    const double width = (p.k + p.g * (1.0 + p.alpha)) / p.alpha;
    const double h = stability_boundary_probe(p, p.a + 0.5 * width, p.a + 2.0 * width);
    t.observe(h - (p.a + width), describe(PathwayModel::two_state(p)));
  }
}

using SuiteFn = std::function<void(CaseGenerator&, const Context&, SuiteResult&)>;

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites = {
      {"model.equilibrium", model_equilibrium},
      {"model.control_affine", model_control_affine},
      {"model.z_drift", model_z_drift},
      {"model.disturbance_channel", model_disturbance_channel},
      {"linearize.left_eigenvector", linearize_left_eigenvector},
      {"linearize.spectrum", linearize_spectrum},
      {"linearize.fd_consistency", linearize_fd_consistency},
      {"linearize.scalar_reduction", linearize_scalar_reduction},
      {"limits.gamma_oracle", limits_gamma_oracle},
      {"limits.energy_oracle", limits_energy_oracle},
      {"limits.reduction", limits_reduction},
      {"limits.monotonicity", limits_monotonicity},
      {"limits.large_n", limits_large_n},
      {"limits.cyclic_examples", limits_cyclic_examples},
      {"limits.hypothesis", limits_hypothesis},
      {"numerics.lyapunov", numerics_lyapunov},
      {"numerics.riccati", numerics_riccati},
      {"numerics.min_energy", numerics_min_energy},
      {"numerics.cheap_control", numerics_cheap_control},
      {"numerics.hinf_symmetry", numerics_hinf_symmetry},
      {"sim.gain_lower_bound", sim_gain_lower_bound},
      {"sim.energy_lower_bound", sim_energy_lower_bound},
      {"sim.boundary_probe", sim_boundary_probe},
  };
  return suites;
}

bool selected(const std::string& name, const std::vector<std::string>& selectors) {
  if (selectors.empty()) return true;
  return std::any_of(selectors.begin(), selectors.end(), [&](const std::string& s) {
    return name == s || name.rfind(s + ".", 0) == 0;
  });
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

VerifyReport run_verification(const VerifyOptions& options) {
  for (const auto& s : options.suites) {
    const auto names = suite_names();
    if (!std::any_of(names.begin(), names.end(), [&](const std::string& n) {
          return n == s || n.rfind(s + ".", 0) == 0;
        })) {
      throw ConfigError("unknown verify suite '" + s + "'");
    }
  }
  if (options.inject_fault && *options.inject_fault != "gamma_closed") {
    throw ConfigError("unknown fault '" + *options.inject_fault + "' (known: gamma_closed)");
  }
  if (!(options.tol_scale > 0.0) || !std::isfinite(options.tol_scale)) {
    throw ConfigError("tolerance scale must be positive and finite");
  }

  Context ctx;
  ctx.scale = options.tol_scale;
  ctx.fault_gamma = options.inject_fault.has_value();

  VerifyReport report;
  report.options = options;
  const auto& suites = registry();
  for (std::size_t i = 0; i < suites.size(); ++i) {
    const auto& [name, fn] = suites[i];
    if (!selected(name, options.suites)) continue;
    SuiteResult result;
    result.name = name;
    // Each suite draws from its own stream so selection does not shift cases.
    CaseGenerator gen(options.seed * 1000003ULL + i + 1);
    try {
      fn(gen, ctx, result);
    } catch (const Error& e) {
      result.passed = false;
      result.detail = std::string("error (") + std::string(to_string(e.kind())) + "): " + e.what();
    }
    report.passed = report.passed && result.passed;
    report.suites.push_back(std::move(result));
  }
  return report;
}

Json to_json(const VerifyReport& report) {
  Json suites = Json::array();
  for (const auto& s : report.suites) {
    suites.push_back({{"name", s.name},
                      {"cases", s.cases},
                      {"max_discrepancy", std::isfinite(s.max_discrepancy) ? Json(s.max_discrepancy)
                                                                           : Json(nullptr)},
                      {"tolerance", s.tolerance},
                      {"passed", s.passed},
                      {"detail", s.detail}});
  }
  return {{"passed", report.passed},
          {"seed", report.options.seed},
          {"tol_scale", report.options.tol_scale},
          {"inject_fault",
           report.options.inject_fault ? Json(*report.options.inject_fault) : Json(nullptr)},
          {"suites", suites}};
}

}  // namespace autolim::cli
