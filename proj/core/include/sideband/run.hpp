#pragma once

#include <tuple>

#include "sideband/analysis.hpp"
#include "sideband/config.hpp"

namespace sideband::cli {

// Least-squares slope of y = a*x through the origin. stderror is the
// residual-scatter estimate, or, when per-point measurement errors are
// given, the larger of that and the propagated measurement uncertainty.
struct SlopeFit {
  double slope = 0.0;
  double stderror = 0.0;
};
SlopeFit fit_through_origin(const std::vector<double>& x, const std::vector<double>& y,
                            const std::vector<double>& sigma = {});

struct Fig3Row {
  double kappa = 0.0, tau = 0.0;
  SweepVariant variant = SweepVariant::SymmetricLTau;
  analysis::SowEstimate estimate;
  analysis::SowReport report;
};

struct Fig3Result {
  std::vector<Fig3Row> rows;
  // slope of SOW vs 1/tau per (kappa, variant), in row order of the grids
  std::vector<std::tuple<double, SweepVariant, SlopeFit>> slopes;
};

// Desk-scale reproduction grid: 8 tau values in [0.6, 2.5] ns, kappa in
// {0.4, 2} 1/ns, both sweep variants. Uses h, seed and workers from the
// config; dw_points/dw_max override the per-sweep detuning grid.
Fig3Result compute_fig3(const RunConfig& c);

// One full-model detuning sweep at the given coupling and delay, normalized
// when the grid reaches past the dome.
models::SweepProfile run_sweep(const RunConfig& c, double kappa, double tau,
                               SweepVariant variant);

// Detuning grid for one LK sweep: [0, 2.5 kappa + 23 sideband spacings]
// unless the config pins dw_min/dw_max/dw_points.
std::vector<double> sweep_grid(const RunConfig& c, double kappa, double tau,
                               SweepVariant variant);

// Executes the configured mode, writing CSV artifacts into c.out.
// Returns 0 on success, 3 on numerical failure (after flushing partial
// results). Configuration errors throw ConfigError (exit code 2 in the CLI).
int run(const RunConfig& c);

}  // namespace sideband::cli
