// Serial reference vs OpenMP kernels. Arg(0) = serial, Arg(1) = parallel.
#include <benchmark/benchmark.h>

#include <vector>

#include "clab/carleman.hpp"
#include "clab/grid.hpp"
#include "clab/mollifier.hpp"
#include "clab/parallel.hpp"
#include "clab/potential_classes.hpp"
#include "clab/resolvent.hpp"
#include "clab/test_functions.hpp"

using namespace clab;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(0) ? Exec::parallel : Exec::serial; }

void BM_build_smoothed(benchmark::State& st) {
  const MollifierKernel chi;
  const auto V = PotentialModel::sawtooth_holder(0.5, 1.0, 1.0, EnvelopeFn::log_decay());
  const auto grid = uniform_nodes(0.05, 20.0, 2000);
  const double rho = sigma_rho(0.5).second;
  for (auto _ : st) {
    auto sp = build_smoothed(V, 0.05, rho, HypothesisCase::holder_radial, 1.0, chi, grid, exec_of(st));
    benchmark::DoNotOptimize(sp.Vh.data());
  }
}

void BM_holder_modulus(benchmark::State& st) {
  std::vector<double> g;
  for (double r = 1e-3; r <= 400.0; r *= 1.01) g.push_back(r);
  const auto V = PotentialModel::sawtooth_holder(0.5, 1.0, 1.0, EnvelopeFn::log_decay());
  const auto m = EnvelopeFn::log_decay();
  for (auto _ : st) benchmark::DoNotOptimize(holder_modulus(V, 0.5, 1e-2, m, g, exec_of(st)));
}

void BM_h_sweep(benchmark::State& st) {
  const auto V = PotentialModel::bump_pair(2.0, 1.5, 0.7);
  const std::vector<double> hs{0.2, 0.14, 0.1, 0.07, 0.05};
  SweepGeometry geo;
  geo.L_min = 10.0;
  geo.max_doublings = 1;
  for (auto _ : st) {
    auto pts = h_sweep(V, 0.5, 0.75, EpsRule{}, hs, geo, exec_of(st));
    benchmark::DoNotOptimize(pts.data());
  }
}

}  // namespace

BENCHMARK(BM_build_smoothed)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_holder_modulus)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_h_sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
