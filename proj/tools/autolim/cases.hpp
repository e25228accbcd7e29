#pragma once

#include <random>

#include "autolim/model.hpp"
#include "autolim/sim.hpp"

namespace autolim::cli {

/// Deterministic parameter generators for the property suites.
class CaseGenerator {
 public:
  explicit CaseGenerator(unsigned long long seed) : rng_(seed) {}

  double uniform(double lo, double hi);
  double log_uniform(double lo, double hi);
  int integer(int lo, int hi);

  /// alpha in [0.25, 8], k in [0.1, 10], g in [0, 5], a in [0, 2], h inside the
  /// stability window.
  TwoStateParams two_state();
  ChainParams chain(int n_max);
  /// Chain whose natural closed loop is linearly stable; h found by rejection.
  ChainParams stable_chain(int n_max);

  /// Narrower ranges (alpha in [0.5, 4], k in [0.5, 5], g in [0, 2], a in [0, 1])
  /// keeping time constants O(1) for simulation suites. The natural loop decays
  /// at least at rate `decay`.
  TwoStateParams moderate_two_state();
  ChainParams moderate_chain(int n_max, double decay);

  /// Random catalog network with equal decay slopes at the equilibrium and r > a.
  CyclicNetwork cyclic(int n_max);
  /// Same construction with r < a.
  CyclicNetwork cyclic_without_unstable_mode(int n_max);

  /// Equilibrium plus a random deviation of at most `scale` relative to each
  /// component.
  Vector perturbed_state(const PathwayModel& model, double scale);

 private:
  CyclicNetwork cyclic_impl(int n_max, bool unstable);
  RateFunction rate_with_slope(double x, double slope);
  RateFunction rate_with_value(double x, double value);

  std::mt19937_64 rng_;
};

}  // namespace autolim::cli
