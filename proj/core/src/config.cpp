#include "sideband/config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "sideband/csv.hpp"

namespace sideband::cli {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Eigen: return "eigen";
    case Mode::Dome: return "dome";
    case Mode::SweepEigen: return "sweep-eigen";
    case Mode::Simulate: return "simulate";
    case Mode::SweepLK: return "sweep-lk";
    case Mode::Sow: return "sow";
    case Mode::Fig3: return "fig3";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  for (Mode m : {Mode::Eigen, Mode::Dome, Mode::SweepEigen, Mode::Simulate,
                 Mode::SweepLK, Mode::Sow, Mode::Fig3})
    if (s == mode_name(m)) return m;
  throw ConfigError("unknown mode '" + s + "'");
}

models::LKParams RunConfig::lk_params() const {
  models::LKParams p;
  p.alpha = alpha;
  p.gain = gain;
  p.tau_in = tau_in;
  p.tau_p = tau_p;
  p.tau_s = tau_s;
  p.n_th = n_th;
  p.pump1 = pump_ratio * p.threshold_current();
  p.pump2 = p.pump1;
  p.set_kappa(kappa);
  p.delta_omega = delta_omega;
  p.tau = tau;
  p.variant = variant;
  p.omega_fixed = omega_fixed;
  p.phase_sign = phase_sign;
  return p;
}

models::MinimalParams RunConfig::minimal_params() const {
  return {delta_omega, kappa, tau, variant, omega_fixed, phase_sign};
}

spectral::SpectralParams RunConfig::spectral_params() const {
  return {delta_omega, kappa, tau, variant, omega_fixed};
}

models::RunSettings RunConfig::run_settings() const {
  return {h, transient, retain, window, seed};
}

namespace {

struct Key {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

double to_double(const std::string& v) {
  std::size_t pos = 0;
  double d = std::stod(v, &pos);
  if (pos != v.size()) throw ConfigError("bad numeric value '" + v + "'");
  return d;
}

long to_long(const std::string& v) {
  std::size_t pos = 0;
  long d = std::stol(v, &pos);
  if (pos != v.size()) throw ConfigError("bad integer value '" + v + "'");
  return d;
}

const std::map<std::string, Key>& key_table() {
  auto num = [](double RunConfig::* f) {
    return Key{[f](RunConfig& c, const std::string& v) { c.*f = to_double(v); },
               [f](const RunConfig& c) { return csv::Writer::format(c.*f); }};
  };
  auto integer = [](int RunConfig::* f) {
    return Key{[f](RunConfig& c, const std::string& v) { c.*f = static_cast<int>(to_long(v)); },
               [f](const RunConfig& c) { return std::to_string(c.*f); }};
  };
  static const std::map<std::string, Key> table = {
      {"mode", {[](RunConfig& c, const std::string& v) { c.mode = parse_mode(v); },
                [](const RunConfig& c) { return std::string(mode_name(c.mode)); }}},
      {"kappa", num(&RunConfig::kappa)},
      {"tau", num(&RunConfig::tau)},
      {"delta_omega", num(&RunConfig::delta_omega)},
      {"dw_min", num(&RunConfig::dw_min)},
      {"dw_max", num(&RunConfig::dw_max)},
      {"dw_points", integer(&RunConfig::dw_points)},
      {"variant",
       {[](RunConfig& c, const std::string& v) {
          if (v == "symmetric") c.variant = SweepVariant::SymmetricLTau;
          else if (v == "fixed") c.variant = SweepVariant::FixedSecondLaser;
          else throw ConfigError("variant must be 'symmetric' or 'fixed'");
        },
        [](const RunConfig& c) {
          return std::string(c.variant == SweepVariant::SymmetricLTau ? "symmetric" : "fixed");
        }}},
      {"omega_fixed", num(&RunConfig::omega_fixed)},
      {"phase_sign", integer(&RunConfig::phase_sign)},
      {"alpha", num(&RunConfig::alpha)},
      {"gain", num(&RunConfig::gain)},
      {"tau_in", num(&RunConfig::tau_in)},
      {"tau_p", num(&RunConfig::tau_p)},
      {"tau_s", num(&RunConfig::tau_s)},
      {"n_th", num(&RunConfig::n_th)},
      {"pump_ratio", num(&RunConfig::pump_ratio)},
      {"h", num(&RunConfig::h)},
      {"transient", num(&RunConfig::transient)},
      {"retain", num(&RunConfig::retain)},
      {"window", num(&RunConfig::window)},
      {"t_end", num(&RunConfig::t_end)},
      {"stride", integer(&RunConfig::stride)},
      {"model",
       {[](RunConfig& c, const std::string& v) {
          if (v != "lk" && v != "minimal") throw ConfigError("model must be 'lk' or 'minimal'");
          c.model = v;
        },
        [](const RunConfig& c) { return c.model; }}},
      {"n_max", integer(&RunConfig::n_max)},
      {"out",
       {[](RunConfig& c, const std::string& v) { c.out = v; },
        [](const RunConfig& c) { return c.out; }}},
      {"seed",
       {[](RunConfig& c, const std::string& v) { c.seed = std::stoull(v); },
        [](const RunConfig& c) { return std::to_string(c.seed); }}},
      {"workers", integer(&RunConfig::workers)},
  };
  return table;
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& what) { throw ConfigError("invalid config: " + what); };
  if (c.kappa < 0.0) fail("kappa must be >= 0");
  if (c.tau < 0.0) fail("tau must be >= 0");
  if (c.h <= 0.0) fail("h must be > 0");
  if (c.tau > 0.0 && c.h > c.tau / 4.0) fail("h must be <= tau/4 for delayed runs");
  if (c.tau_in <= 0.0) fail("tau_in must be > 0");
  if (c.tau_p <= 0.0) fail("tau_p must be > 0");
  if (c.tau_s <= 0.0) fail("tau_s must be > 0");
  if (c.n_th <= 0.0) fail("n_th must be > 0");
  if (c.pump_ratio <= 1.0) fail("pump_ratio must be > 1 (above threshold)");
  if (c.transient < 0.0 || c.retain <= 0.0 || c.window <= 0.0) fail("bad time windows");
  if (c.t_end <= 0.0) fail("t_end must be > 0");
  if (c.stride < 1) fail("stride must be >= 1");
  if (c.dw_points < 0) fail("dw_points must be >= 0");
  if (c.dw_points > 0 && c.dw_points < 2) fail("dw_points must be >= 2");
  if (c.dw_points > 0 && !(c.dw_min < c.dw_max)) fail("need dw_min < dw_max");
  if (c.n_max < 2) fail("n_max must be >= 2");
  if (c.workers < 1) fail("workers must be >= 1");
  if (c.phase_sign != 1 && c.phase_sign != -1) fail("phase_sign must be +-1");
  if (!std::isfinite(c.omega_fixed)) fail("omega_fixed must be finite");
}

}  // namespace

RunConfig parse_config(const std::string& text,
                       const std::vector<std::string>& overrides,
                       std::ostream* log) {
  RunConfig c;
  const auto& table = key_table();

  auto apply = [&](const std::string& key, const std::string& value, int line) {
    auto it = table.find(key);
    if (it == table.end()) {
      std::ostringstream os;
      os << "unknown key '" << key << "'";
      if (line > 0) os << " at line " << line;
      throw ConfigError(os.str());
    }
    try {
      it->second.set(c, value);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      std::ostringstream os;
      os << "bad value for '" << key << "'";
      if (line > 0) os << " at line " << line;
      throw ConfigError(os.str());
    }
    if (std::find(c.user_keys.begin(), c.user_keys.end(), key) == c.user_keys.end())
      c.user_keys.push_back(key);
  };

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << "expected key=value at line " << line_no;
      throw ConfigError(os.str());
    }
    auto strip = [](std::string s) {
      const auto sb = s.find_first_not_of(" \t");
      if (sb == std::string::npos) return std::string();
      const auto se = s.find_last_not_of(" \t");
      return s.substr(sb, se - sb + 1);
    };
    apply(strip(line.substr(0, eq)), strip(line.substr(eq + 1)), line_no);
  }

  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + ov + "' is not key=value");
    apply(ov.substr(0, eq), ov.substr(eq + 1), 0);
  }

  validate(c);

  if (log) {
    for (const auto& [key, k] : table) {
      const bool user =
          std::find(c.user_keys.begin(), c.user_keys.end(), key) != c.user_keys.end();
      *log << "config: " << key << " = " << k.get(c) << (user ? "  (user)" : "  (default)")
           << '\n';
    }
  }
  return c;
}

std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> kv;
  for (const auto& [key, k] : key_table()) kv.emplace_back(key, k.get(c));
  return kv;
}

}  // namespace sideband::cli
