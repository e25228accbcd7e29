#include <benchmark/benchmark.h>

#include "autolim/limits.hpp"
#include "autolim/linearize.hpp"
#include "autolim/numerics.hpp"
#include "autolim/sim.hpp"

namespace {

using namespace autolim;

PathwayModel chain_of(int n) { return PathwayModel::chain({1.0, 1.0, 0.5, 0.5, 0.5, n}); }

void BM_Analyze(benchmark::State& state) {
  const PathwayModel model = chain_of(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(analyze(model));
}
BENCHMARK(BM_Analyze)->Arg(1)->Arg(5)->Arg(20)->Arg(60);

void BM_Riccati(benchmark::State& state) {
  const LinearPlant plant = linearize_full(chain_of(static_cast<int>(state.range(0))));
  const Matrix Q = plant.Cy.transpose() * plant.Cy;
  for (auto _ : state) benchmark::DoNotOptimize(riccati_solve(plant.A, plant.Bu, Q, 1e-2));
}
BENCHMARK(BM_Riccati)->Arg(1)->Arg(5)->Arg(10)->Arg(20);

void BM_Hinf(benchmark::State& state) {
  const PathwayModel model = PathwayModel::chain({1.0, 1.0, 0.5, 0.3, 0.2,
                                                  static_cast<int>(state.range(0))});
  const LinearPlant plant = linearize_full(model);
  const Matrix A = closed_loop(plant, natural_feedback_gain(model));
  for (auto _ : state) benchmark::DoNotOptimize(hinf_norm(A, plant.Bd, plant.Cy));
}
BENCHMARK(BM_Hinf)->Arg(1)->Arg(4)->Arg(8);

void BM_Integrate(benchmark::State& state) {
  const PathwayModel model = PathwayModel::two_state({1, 1, 1, 3, 1});
  const Vector x0 = (Vector(2) << 1.5, 1.1).finished();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        integrate(model, NaturalController{}, ZeroDisturbance{}, x0, 10.0, 1e-3, {100}));
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_Integrate);

}  // namespace

BENCHMARK_MAIN();
