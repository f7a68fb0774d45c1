#include <benchmark/benchmark.h>

#include "sideband/dde.hpp"
#include "sideband/lambert_w.hpp"
#include "sideband/models.hpp"
#include "sideband/spectral.hpp"

namespace {

using namespace sideband;

void BM_lambert_w(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambert_w(WBranch::principal, x));
    x = x < 10.0 ? x + 1e-3 : 0.0;
  }
}
BENCHMARK(BM_lambert_w);

void BM_find_eigenvalues(benchmark::State& state) {
  spectral::SpectralParams p;
  p.kappa = 1.0;
  p.tau = 1.5;
  p.delta_omega = 1.0;
  const auto w = spectral::default_window(p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral::find_eigenvalues(p, w));
  }
}
BENCHMARK(BM_find_eigenvalues);

void BM_dominant_rate(benchmark::State& state) {
  spectral::SpectralParams p;
  p.kappa = 2.0;
  p.tau = 1.0;
  for (auto _ : state) {
    p.delta_omega = 3.0 + 0.01 * (state.iterations() % 100);
    benchmark::DoNotOptimize(spectral::dominant_rate(p));
  }
}
BENCHMARK(BM_dominant_rate);

void BM_winding_number(benchmark::State& state) {
  spectral::SpectralParams p;
  p.kappa = 1.0;
  p.tau = 3.0;
  p.delta_omega = 3.0;
  const auto w = spectral::default_window(p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral::winding_number(p, w));
  }
}
BENCHMARK(BM_winding_number);

// One nanosecond of the six-variable laser system at the production step.
void BM_lk_integrate_ns(benchmark::State& state) {
  models::LKParams p;
  p.pump1 = p.pump2 = 1.03 * p.threshold_current();
  p.set_kappa(2.0);
  p.delta_omega = 8.0;
  p.tau = 1.0;
  const double h = 1e-3;
  const auto rhs = models::make_lk_rhs(p);
  const auto hist = models::seed_history(p, h, 1);
  dde::IntegrateOptions opt;
  opt.record = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dde::integrate(6, p.tau, rhs, hist, h, 1.0, opt));
  }
}
BENCHMARK(BM_lk_integrate_ns)->Unit(benchmark::kMillisecond);

void BM_minimal_integrate_ns(benchmark::State& state) {
  models::MinimalParams p;
  p.kappa = 1.0;
  p.tau = 1.0;
  p.delta_omega = 2.0;
  const double h = 1e-3;
  const auto rhs = models::make_minimal_rhs(p);
  const auto hist = models::seed_history(p, h);
  dde::IntegrateOptions opt;
  opt.record = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dde::integrate(4, p.tau, rhs, hist, h, 1.0, opt));
  }
}
BENCHMARK(BM_minimal_integrate_ns)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
