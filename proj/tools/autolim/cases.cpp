#include "cases.hpp"

#include <cmath>

#include "autolim/error.hpp"
#include "autolim/linearize.hpp"
#include "autolim/numerics.hpp"

namespace autolim::cli {

double CaseGenerator::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

double CaseGenerator::log_uniform(double lo, double hi) {
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

int CaseGenerator::integer(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng_);
}

TwoStateParams CaseGenerator::two_state() {
  TwoStateParams p;
  p.alpha = log_uniform(0.25, 8.0);
  p.k = log_uniform(0.1, 10.0);
  p.g = uniform(0.0, 5.0);
  p.a = uniform(0.0, 2.0);
  const double width = (p.k + p.g * (1.0 + p.alpha)) / p.alpha;
  p.h = p.a + uniform(0.2, 0.8) * width;
  return p;
}

ChainParams CaseGenerator::chain(int n_max) {
  ChainParams p;
  p.alpha = log_uniform(0.25, 8.0);
  p.K = log_uniform(0.1, 10.0);
  p.g = uniform(0.0, 5.0);
  p.a = uniform(0.0, 2.0);
  p.h = p.a + uniform(0.0, 2.0);
  p.n = integer(1, n_max);
  return p;
}

ChainParams CaseGenerator::stable_chain(int n_max) {
  for (;;) {
    ChainParams p = chain(n_max);
    // The stable window in h - a shrinks with n; sample inside [0, 1.2].
    p.h = p.a + uniform(0.02, 1.2);
    const PathwayModel model = PathwayModel::chain(p);
    if (is_hurwitz(closed_loop(linearize_full(model), natural_feedback_gain(model)))) return p;
  }
}

TwoStateParams CaseGenerator::moderate_two_state() {
  TwoStateParams p;
  p.alpha = log_uniform(0.5, 4.0);
  p.k = log_uniform(0.5, 5.0);
  p.g = uniform(0.0, 2.0);
  p.a = uniform(0.0, 1.0);
  const double width = (p.k + p.g * (1.0 + p.alpha)) / p.alpha;
  p.h = p.a + uniform(0.3, 0.7) * width;
  return p;
}

ChainParams CaseGenerator::moderate_chain(int n_max, double decay) {
  for (;;) {
    ChainParams p;
    p.alpha = log_uniform(0.5, 4.0);
    p.K = log_uniform(0.5, 5.0);
    p.g = uniform(0.0, 2.0);
    p.a = uniform(0.0, 1.0);
    p.n = integer(1, n_max);
    const PathwayModel base = PathwayModel::chain(p);
    const LinearPlant plant = linearize_full(base);
    const Matrix shift = decay * Matrix::Identity(plant.A.rows(), plant.A.cols());
    for (int attempt = 0; attempt < 100; ++attempt) {
      p.h = p.a + uniform(0.02, 1.2);
      const PathwayModel model = PathwayModel::chain(p);
      if (is_hurwitz(closed_loop(plant, natural_feedback_gain(model)) + shift)) return p;
    }
  }
}

RateFunction CaseGenerator::rate_with_slope(double x, double slope) {
  switch (integer(0, 2)) {
    case 0: return RateFunction::linear(slope);
    case 1: return RateFunction::saturating(slope * (1.0 + x) * (1.0 + x));
    default: {
      const double p = uniform(0.5, 2.0);
      return RateFunction::power(slope / (p * std::pow(x, p - 1.0)), p);
    }
  }
}

RateFunction CaseGenerator::rate_with_value(double x, double value) {
  switch (integer(0, 2)) {
    case 0: return RateFunction::linear(value / x);
    case 1: return RateFunction::saturating(value * (1.0 + x) / x);
    default: {
      const double p = uniform(0.5, 2.0);
      return RateFunction::power(value / std::pow(x, p), p);
    }
  }
}

CyclicNetwork CaseGenerator::cyclic_impl(int n_max, bool unstable) {
  for (;;) {
    const int n = integer(1, n_max);
    const double alpha = log_uniform(0.25, 4.0);
    const double a = uniform(0.2, 2.0);
    Vector eq(n + 1);
    for (int i = 0; i <= n; ++i) eq[i] = uniform(0.5, 2.0);

    std::vector<RateFunction> f;
    for (int i = 0; i < n; ++i) f.push_back(rate_with_slope(eq[i], a));
    const RateFunction sink = rate_with_slope(eq[n], uniform(0.0, 2.0));
    const double u_star = f[0](eq[0]);

    std::vector<CyclicNode> nodes;
    for (int i = 0; i < n; ++i) {
      const double value = i + 1 < n ? f[i + 1](eq[i + 1]) : sink(eq[n]) + alpha * u_star;
      nodes.push_back({f[i], rate_with_value(eq[i], value)});
    }
    CyclicNetwork net(alpha, std::move(nodes), sink, eq);
    const double ratio = net.r() / net.a();
    if (unstable ? ratio > 1.05 : ratio < 0.95) return net;
  }
}

CyclicNetwork CaseGenerator::cyclic(int n_max) { return cyclic_impl(n_max, true); }

CyclicNetwork CaseGenerator::cyclic_without_unstable_mode(int n_max) {
  return cyclic_impl(n_max, false);
}

Vector CaseGenerator::perturbed_state(const PathwayModel& model, double scale) {
  Vector state = equilibrium(model).state();
  for (Eigen::Index i = 0; i < state.size(); ++i) state[i] *= 1.0 + uniform(-scale, scale);
  return state;
}

}  // namespace autolim::cli
