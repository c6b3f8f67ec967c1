#include <benchmark/benchmark.h>

#include "triconv/autoconv.hpp"
#include "triconv/extension.hpp"
#include "triconv/oracle.hpp"

namespace {

using namespace triconv;

const CurveParams kSuper{0.05, 2.0, 3.0, {}};

void BM_SolveRho(benchmark::State& state) {
  const TripleConvolution m(kSuper);
  const double v = 0.5 * m.eps_max();
  double theta = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.solve_rho(0.03, theta, v));
    theta += 0.01;
  }
}
BENCHMARK(BM_SolveRho);

void BM_Density(benchmark::State& state) {
  const TripleConvolution m(kSuper);
  const int nodes = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(m.density({0.02, 0.05}, nodes));
}
BENCHMARK(BM_Density)->Arg(64)->Arg(256)->Arg(1024);

void BM_DensityWithPhi(benchmark::State& state) {
  const TripleConvolution m(CurveParams{0.05, 2.0, 3.0, {1.0, -2.0, 0.5}});
  for (auto _ : state) benchmark::DoNotOptimize(m.density({0.02, 0.05}));
}
BENCHMARK(BM_DensityWithPhi);

void BM_OracleBoxAverage(benchmark::State& state) {
  const BruteForceOracle o(kSuper);
  const int grid_n = static_cast<int>(state.range(0));
  const double tau = 3.0 * o.curve().g(0.01) + 0.0025;
  for (auto _ : state) benchmark::DoNotOptimize(o.box_average(0.03, tau, 1e-6, grid_n));
}
BENCHMARK(BM_OracleBoxAverage)->Arg(256)->Arg(2048);

void BM_L2Norm(benchmark::State& state) {
  const Curve c(kSuper);
  const auto f = TrialFunction::gaussian(0.02);
  for (auto _ : state) benchmark::DoNotOptimize(L2_norm(c, f));
}
BENCHMARK(BM_L2Norm);

}  // namespace

BENCHMARK_MAIN();
