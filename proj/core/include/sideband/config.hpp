#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sideband/models.hpp"

namespace sideband::cli {

using spectral::SweepVariant;

enum class Mode { Eigen, Dome, SweepEigen, Simulate, SweepLK, Sow, Fig3 };

const char* mode_name(Mode m);
Mode parse_mode(const std::string& s);  // throws ConfigError

// Full effective configuration for one run. Every field has a default; the
// parser records which ones the user set so provenance can be logged.
struct RunConfig {
  Mode mode = Mode::Eigen;

  double kappa = 1.0;        // 1/ns
  double tau = 1.0;          // ns
  double delta_omega = 1.0;  // rad/ns (eigen mode)
  double dw_min = 0.0;       // detuning grid for sweep modes
  double dw_max = 0.0;       // 0 = choose automatically
  int dw_points = 0;         // 0 = choose automatically
  SweepVariant variant = SweepVariant::SymmetricLTau;
  double omega_fixed = 0.0;
  int phase_sign = +1;

  // Lang-Kobayashi overrides
  double alpha = 2.0;
  double gain = 100.0;
  double tau_in = 1e-3;
  double tau_p = 0.01;
  double tau_s = 1.0;
  double n_th = 1.0;
  double pump_ratio = 1.03;  // J / J_th for both lasers

  double h = 1e-3;          // ns
  double transient = 50.0;  // ns
  double retain = 10.0;     // ns
  double window = 1.0;      // ns
  double t_end = 10.0;      // ns, simulate mode
  int stride = 10;          // simulate mode CSV decimation
  std::string model = "lk";  // simulate mode: lk | minimal
  int n_max = 12;

  std::string out = ".";
  std::uint64_t seed = 0;
  int workers = 1;

  std::vector<std::string> user_keys;  // keys explicitly set

  models::LKParams lk_params() const;
  models::MinimalParams minimal_params() const;
  spectral::SpectralParams spectral_params() const;
  models::RunSettings run_settings() const;
};

// Parses plain-text key=value configuration (one pair per line, '#' comments)
// and then applies override pairs from the command line. Unknown keys and
// invariant violations are errors. Every defaulted value is echoed to the
// log stream with its provenance.
RunConfig parse_config(const std::string& text,
                       const std::vector<std::string>& overrides,
                       std::ostream* log = nullptr);

// key=value lines describing the full effective config (CSV metadata block).
std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& c);

}  // namespace sideband::cli
