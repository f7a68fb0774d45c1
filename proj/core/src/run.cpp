#include "sideband/run.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>

#include "sideband/csv.hpp"
#include "sideband/lambert_w.hpp"

namespace sideband::cli {

namespace {

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

std::string out_path(const RunConfig& c, const std::string& name) {
  fs::create_directories(c.out);
  return (fs::path(c.out) / name).string();
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

std::string variant_name(SweepVariant v) {
  return v == SweepVariant::SymmetricLTau ? "symmetric" : "fixed";
}

void write_profile_csv(const RunConfig& c, const std::string& name,
                       const models::SweepProfile& prof) {
  csv::Writer w(out_path(c, name),
                {"delta_omega", "I1", "I2", "I1_norm", "I2_norm", "converged"});
  const bool has_norm = prof.normalized;
  for (std::size_t i = 0; i < prof.detuning.size(); ++i) {
    w.row({prof.detuning[i], prof.I1[i], prof.I2[i],
           has_norm ? prof.I1_norm[i] : std::nan(""),
           has_norm ? prof.I2_norm[i] : std::nan(""),
           static_cast<double>(prof.converged[i])});
  }
  w.metadata(config_echo(c));
}

}  // namespace

models::SweepProfile run_sweep(const RunConfig& c, double kappa, double tau,
                               SweepVariant variant) {
  models::LKParams p = c.lk_params();
  p.set_kappa(kappa);
  p.tau = tau;
  p.variant = variant;
  const auto grid = sweep_grid(c, kappa, tau, variant);
  auto prof = models::sweep_detuning(p, grid, variant, c.run_settings(), c.workers);
  try {
    prof = analysis::normalize_profile(prof);
  } catch (const InsufficientRangeError&) {
    // raw profile is still worth writing; norm columns stay empty
  }
  return prof;
}

namespace {

void mode_eigen(const RunConfig& c) {
  const auto p = c.spectral_params();
  const auto roots = spectral::find_eigenvalues(p, spectral::default_window(p));
  csv::Writer w(out_path(c, "eigen.csv"), {"u", "v", "residual"});
  for (const auto& r : roots) w.row({r.u, r.v, r.residual});
  w.metadata(config_echo(c));
}

void mode_dome(const RunConfig& c) {
  const int n = c.dw_points > 0 ? c.dw_points : 200;
  const double hi = c.dw_points > 0 ? c.dw_max : 1.2 * c.kappa;
  const double lo = c.dw_points > 0 ? c.dw_min : 0.0;
  csv::Writer w(out_path(c, "dome.csv"), {"delta_omega", "dome_rate"});
  for (double dw : linspace(lo, hi, n)) {
    const auto u = spectral::central_dome_rate(c.kappa, c.tau, dw);
    w.row({dw, u ? *u : std::nan("")});
  }
  w.metadata(config_echo(c));
}

void mode_sweep_eigen(const RunConfig& c) {
  spectral::SpectralParams p = c.spectral_params();
  const double spacing = kPi / c.tau;
  const double hi = c.dw_points > 0
                        ? c.dw_max
                        : std::hypot(c.n_max * kPi / (2.0 * c.tau), c.kappa) + spacing;
  const double lo = c.dw_points > 0 ? c.dw_min : 0.0;
  const int n = c.dw_points > 0 ? c.dw_points : 400;
  const auto grid = linspace(lo, hi, n);
  std::vector<double> rate(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    p.delta_omega = grid[i];
    rate[i] = spectral::dominant_rate(p);
  }
  {
    csv::Writer w(out_path(c, "sweep_eigen.csv"), {"delta_omega", "U"});
    for (std::size_t i = 0; i < grid.size(); ++i) w.row({grid[i], rate[i]});
    w.metadata(config_echo(c));
  }
  csv::Writer w(out_path(c, "sweep_eigen_transitions.csv"),
                {"crossing", "n", "predicted", "abs_diff"});
  const auto predictions =
      c.tau > 0.0 ? spectral::transition_detunings(c.kappa, c.tau, std::max(c.n_max, 2))
                  : std::vector<std::pair<int, double>>{};
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if ((rate[i - 1] > 0.0) == (rate[i] > 0.0)) continue;
    const double cross =
        spectral::find_rate_crossing(p, grid[i - 1], grid[i], 1e-6 * std::max(c.kappa, 1.0));
    double best = std::nan("");
    int best_n = 0;
    for (const auto& [nn, dwn] : predictions) {
      if (!std::isfinite(best) || std::abs(dwn - cross) < std::abs(best - cross)) {
        best = dwn;
        best_n = nn;
      }
    }
    const bool sym = c.variant == SweepVariant::SymmetricLTau;
    w.row({cross, sym ? static_cast<double>(best_n) : std::nan(""),
           sym ? best : std::nan(""), sym ? std::abs(best - cross) : std::nan("")});
  }
  w.metadata(config_echo(c));
}

void mode_simulate(const RunConfig& c) {
  dde::IntegrateOptions opt;
  opt.record_stride = static_cast<std::size_t>(c.stride);
  if (c.model == "lk") {
    const auto p = c.lk_params();
    const auto traj = dde::integrate(6, p.tau, models::make_lk_rhs(p),
                                     models::seed_history(p, c.h, c.seed), c.h, c.t_end, opt);
    csv::Writer w(out_path(c, "trajectory.csv"),
                  {"t", "re_E1", "im_E1", "re_E2", "im_E2", "N1", "N2"});
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const auto s = traj.state(i);
      w.row({traj.times[i], s[0], s[1], s[2], s[3], s[4], s[5]});
    }
    w.metadata(config_echo(c));
  } else {
    const auto p = c.minimal_params();
    const auto traj = dde::integrate(4, p.tau, models::make_minimal_rhs(p),
                                     models::seed_history(p, c.h), c.h, c.t_end, opt);
    csv::Writer w(out_path(c, "trajectory.csv"),
                  {"t", "re_E1", "im_E1", "re_E2", "im_E2"});
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const auto s = traj.state(i);
      w.row({traj.times[i], s[0], s[1], s[2], s[3]});
    }
    w.metadata(config_echo(c));
  }
}

void write_report_rows(csv::Writer& w, const std::vector<Fig3Row>& rows) {
  for (const auto& r : rows) {
    w.row_mixed({csv::Writer::format(r.kappa), csv::Writer::format(r.tau),
                 variant_name(r.variant), csv::Writer::format(r.estimate.value),
                 csv::Writer::format(r.estimate.fwhm_error),
                 csv::Writer::format(r.report.predicted),
                 csv::Writer::format(r.report.rel_dev),
                 r.report.within_error ? "1" : "0"});
  }
}

void mode_sow(const RunConfig& c) {
  const auto prof = run_sweep(c, c.kappa, c.tau, c.variant);
  write_profile_csv(c, "sow_profile.csv", prof);
  Fig3Row row;
  row.kappa = c.kappa;
  row.tau = c.tau;
  row.variant = c.variant;
  row.estimate = analysis::extract_sow(prof);
  row.report = analysis::compare_sow(row.estimate, c.kappa, c.tau, c.variant);
  csv::Writer w(out_path(c, "sow.csv"),
                {"kappa", "tau", "variant", "sow", "sow_err", "sow_predicted", "rel_dev",
                 "within_error"});
  write_report_rows(w, {row});
  w.metadata(config_echo(c));
}

void mode_fig3(const RunConfig& c) {
  const auto result = compute_fig3(c);
  csv::Writer w(out_path(c, "fig3.csv"),
                {"kappa", "tau", "variant", "sow", "sow_err", "sow_predicted", "rel_dev",
                 "within_error"});
  write_report_rows(w, result.rows);
  std::vector<std::pair<std::string, std::string>> meta;
  for (const auto& [kappa, variant, fit] : result.slopes) {
    const std::string base = "slope_" + variant_name(variant) + "_kappa" +
                             csv::Writer::format(kappa);
    meta.emplace_back(base, csv::Writer::format(fit.slope));
    meta.emplace_back(base + "_stderr", csv::Writer::format(fit.stderror));
  }
  auto echo = config_echo(c);
  meta.insert(meta.end(), echo.begin(), echo.end());
  w.metadata(meta);
}

}  // namespace

SlopeFit fit_through_origin(const std::vector<double>& x, const std::vector<double>& y,
                            const std::vector<double>& sigma) {
  if (x.size() != y.size() || x.size() < 2)
    throw DomainError("fit_through_origin: need >= 2 samples");
  if (!sigma.empty() && sigma.size() != x.size())
    throw DomainError("fit_through_origin: sigma size mismatch");
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.slope * x[i];
    ss += r * r;
  }
  fit.stderror = std::sqrt(ss / (static_cast<double>(x.size()) - 1.0) / sxx);
  if (!sigma.empty()) {
    // propagate the per-point measurement errors through the estimator;
    // scatter alone understates the uncertainty when points carry error bars
    double sxs = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sxs += x[i] * x[i] * sigma[i] * sigma[i];
    fit.stderror = std::max(fit.stderror, std::sqrt(sxs) / sxx);
  }
  return fit;
}

std::vector<double> sweep_grid(const RunConfig& c, double kappa, double tau,
                               SweepVariant variant) {
  if (c.dw_points > 0) return linspace(c.dw_min, c.dw_max, c.dw_points);
  const double spacing =
      kPi / tau / (variant == SweepVariant::FixedSecondLaser ? 2.0 : 1.0);
  const double hi = 2.5 * kappa + 23.0 * spacing;
  return linspace(0.0, hi, 1200);
}

Fig3Result compute_fig3(const RunConfig& c) {
  const std::vector<double> taus = linspace(0.6, 2.5, 8);
  const std::vector<double> kappas = {0.4, 2.0};
  Fig3Result result;
  for (SweepVariant variant : {SweepVariant::SymmetricLTau, SweepVariant::FixedSecondLaser}) {
    for (double kappa : kappas) {
      std::vector<double> inv_tau, sow, sow_err;
      for (double tau : taus) {
        const auto prof = run_sweep(c, kappa, tau, variant);
        Fig3Row row;
        row.kappa = kappa;
        row.tau = tau;
        row.variant = variant;
        row.estimate = analysis::extract_sow(prof);
        row.report = analysis::compare_sow(row.estimate, kappa, tau, variant);
        result.rows.push_back(row);
        inv_tau.push_back(1.0 / tau);
        sow.push_back(row.estimate.value);
        sow_err.push_back(row.estimate.fwhm_error);
      }
      result.slopes.emplace_back(kappa, variant,
                                 fit_through_origin(inv_tau, sow, sow_err));
    }
  }
  return result;
}

int run(const RunConfig& c) {
  try {
    switch (c.mode) {
      case Mode::Eigen: mode_eigen(c); break;
      case Mode::Dome: mode_dome(c); break;
      case Mode::SweepEigen: mode_sweep_eigen(c); break;
      case Mode::Simulate: mode_simulate(c); break;
      case Mode::SweepLK: {
        const auto prof = run_sweep(c, c.kappa, c.tau, c.variant);
        write_profile_csv(c, "sweep_lk.csv", prof);
        break;
      }
      case Mode::Sow: mode_sow(c); break;
      case Mode::Fig3: mode_fig3(c); break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    std::cerr << "error: numerical-failure: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace sideband::cli
