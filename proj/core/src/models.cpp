#include "sideband/models.hpp"

#include <cmath>
#include <atomic>
#include <iostream>
#include <numbers>
#include <random>
#include <thread>

namespace sideband::models {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

long history_nodes(double tau, double h) {
  return tau > 0.0 ? static_cast<long>(std::ceil(tau / h - 1e-9)) + 1 : 1;
}

}  // namespace

Complex coupling_phase(SweepVariant variant, int phase_sign, double omega_fixed,
                       double delta_omega, double tau) {
  if (variant == SweepVariant::SymmetricLTau)
    return {static_cast<double>(phase_sign), 0.0};
  const double omega0 = omega_fixed + delta_omega;
  return std::exp(Complex(0.0, -omega0 * tau));
}

void MinimalRhs::operator()(double, const double* y, const double* yd, double* dydt) const {
  const double cr = coupling.real(), ci = coupling.imag();
  // dE1 = i dw E1 + c E2d
  dydt[0] = -delta_omega * y[1] + cr * yd[2] - ci * yd[3];
  dydt[1] = delta_omega * y[0] + cr * yd[3] + ci * yd[2];
  // dE2 = -i dw E2 + c E1d
  dydt[2] = delta_omega * y[3] + cr * yd[0] - ci * yd[1];
  dydt[3] = -delta_omega * y[2] + cr * yd[1] + ci * yd[0];
}

MinimalRhs make_minimal_rhs(const MinimalParams& p) {
  const Complex c = p.kappa * coupling_phase(p.variant, p.phase_sign, p.omega_fixed,
                                             p.delta_omega, p.tau);
  return {p.delta_omega, c};
}

void LKRhs::operator()(double, const double* y, const double* yd, double* dydt) const {
  const double cr = coupling.real(), ci = coupling.imag();
  const double n1 = y[4], n2 = y[5];
  const double g1 = 0.5 * gain * n1;  // Re and alpha-tilted Im gain for E1
  const double g2 = 0.5 * gain * n2;
  // dE1 = (1+i alpha)/2 G N1 E1 + i dw E1 + c E2d
  dydt[0] = g1 * y[0] - (alpha * g1 + delta_omega) * y[1] + cr * yd[2] - ci * yd[3];
  dydt[1] = g1 * y[1] + (alpha * g1 + delta_omega) * y[0] + cr * yd[3] + ci * yd[2];
  // dE2 = (1+i alpha)/2 G N2 E2 - i dw E2 + c E1d
  dydt[2] = g2 * y[2] - (alpha * g2 - delta_omega) * y[3] + cr * yd[0] - ci * yd[1];
  dydt[3] = g2 * y[3] + (alpha * g2 - delta_omega) * y[2] + cr * yd[1] + ci * yd[0];
  const double i1 = y[0] * y[0] + y[1] * y[1];
  const double i2 = y[2] * y[2] + y[3] * y[3];
  dydt[4] = pump1 - n_th / tau_s - n1 / tau_s - (1.0 / tau_p + gain * n1) * i1;
  dydt[5] = pump2 - n_th / tau_s - n2 / tau_s - (1.0 / tau_p + gain * n2) * i2;
}

LKRhs make_lk_rhs(const LKParams& p) {
  const Complex c = (p.feedback / p.tau_in) *
                    coupling_phase(p.variant, p.phase_sign, p.omega_fixed,
                                   p.delta_omega, p.tau);
  return {p.delta_omega, p.alpha, p.gain, p.tau_p, p.tau_s, p.pump1, p.pump2, p.n_th, c};
}

void SeededHistory::operator()(double t, double* y) const {
  long idx = std::lround(t / h) + (n_nodes - 1);
  if (idx < 0) idx = 0;
  if (idx >= n_nodes) idx = n_nodes - 1;
  const double* src = nodes.data() + static_cast<std::size_t>(idx) * dim;
  std::copy(src, src + dim, y);
}

SeededHistory seed_history(const MinimalParams& p, double h) {
  SeededHistory hist;
  hist.dim = 4;
  hist.h = h;
  hist.n_nodes = history_nodes(p.tau, h);
  hist.nodes.assign(static_cast<std::size_t>(hist.n_nodes) * hist.dim, 0.0);
  for (long j = 0; j < hist.n_nodes; ++j) {
    hist.nodes[j * 4 + 0] = 1.0;  // E1 = 1
    hist.nodes[j * 4 + 2] = 1.0;  // E2 = 1
  }
  return hist;
}

SeededHistory seed_history(const LKParams& p, double h, std::uint64_t seed) {
  LKParams p0 = p;  // zero-delay counterpart, same coupling constant
  const auto rhs = make_lk_rhs(p0);

  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_real_distribution<double> pert(-1e-3, 1e-3);
  const double i1 = std::max(p.solitary_intensity(p.pump1), 1e-8);
  const double i2 = std::max(p.solitary_intensity(p.pump2), 1e-8);
  std::vector<double> y = {std::sqrt(i1) * (1.0 + pert(rng)), std::sqrt(i1) * pert(rng),
                           std::sqrt(i2) * (1.0 + pert(rng)), std::sqrt(i2) * pert(rng),
                           pert(rng), pert(rng)};

  // March the zero-delay system in 1 ns chunks until the windowed intensity
  // drift falls below 1e-6 relative. Detuned coupled lasers never reach that
  // (persistent beat limit cycle), so a bounded oscillation of the window
  // means, within 1% band over the last ten windows, also counts as settled.
  double prev1 = -1.0, prev2 = -1.0;
  std::vector<double> recent1, recent2;
  bool settled = false;
  double elapsed = 0.0;
  while (elapsed < 200.0) {
    double s1 = 0.0, s2 = 0.0;
    long count = 0;
    auto chunk_history = [&](double, double* out) { std::copy(y.begin(), y.end(), out); };
    auto observer = [&](double, const double* st) {
      s1 += st[0] * st[0] + st[1] * st[1];
      s2 += st[2] * st[2] + st[3] * st[3];
      ++count;
      std::copy(st, st + 6, y.begin());
    };
    dde::IntegrateOptions opt;
    opt.record = false;
    dde::integrate(6, 0.0, rhs, chunk_history, h, 1.0, opt, observer);
    elapsed += 1.0;
    const double m1 = s1 / count, m2 = s2 / count;
    if (prev1 >= 0.0) {
      const double d1 = std::abs(m1 - prev1) / std::max(m1, 1e-12);
      const double d2 = std::abs(m2 - prev2) / std::max(m2, 1e-12);
      if (d1 < 1e-6 && d2 < 1e-6) {
        settled = true;
        break;
      }
    }
    prev1 = m1;
    prev2 = m2;
    recent1.push_back(m1);
    recent2.push_back(m2);
    if (recent1.size() > 10) {
      recent1.erase(recent1.begin());
      recent2.erase(recent2.begin());
    }
    if (elapsed >= 20.0 && recent1.size() == 10) {
      auto banded = [](const std::vector<double>& r) {
        const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
        return (*hi - *lo) / std::max(*hi, 1e-12) < 1e-2;
      };
      if (banded(recent1) && banded(recent2)) {
        settled = true;
        break;
      }
    }
  }
  if (!settled) {
    // Strongly coupled detuned lasers can be chaotic already at zero delay;
    // a bounded attractor is still a usable seed. Only unbounded growth is
    // a real failure (non-finite blowup is caught inside integrate()).
    const double scale = std::max({i1, i2, 1e-12});
    const double worst = std::max(*std::max_element(recent1.begin(), recent1.end()),
                                  *std::max_element(recent2.begin(), recent2.end()));
    if (!(worst < 1e4 * scale))
      throw SeedingDivergenceError(
          "seed_history: zero-delay intensities grew unbounded within 200 ns");
  }

  SeededHistory hist;
  hist.dim = 6;
  hist.h = h;
  hist.n_nodes = history_nodes(p.tau, h);
  hist.nodes.assign(static_cast<std::size_t>(hist.n_nodes) * hist.dim, 0.0);
  if (hist.n_nodes == 1) {
    std::copy(y.begin(), y.end(), hist.nodes.begin());
    return hist;
  }
  // One more pass of length (n_nodes-1)*h supplies the segment itself.
  long written = 0;
  auto tail_history = [&](double, double* out) { std::copy(y.begin(), y.end(), out); };
  auto collect = [&](double, const double* st) {
    if (written < hist.n_nodes)
      std::copy(st, st + 6, hist.nodes.begin() + (written++) * 6);
  };
  dde::IntegrateOptions opt;
  opt.record = false;
  dde::integrate(6, 0.0, rhs, tail_history, h, (hist.n_nodes - 1) * h, opt, collect);
  return hist;
}

namespace {

SteadyState run_once(const LKParams& p, const RunSettings& run, double transient) {
  const auto rhs = make_lk_rhs(p);
  const auto hist = seed_history(p, run.h, run.seed);
  const long m = std::max(1L, std::lround(run.window / run.h));
  std::vector<double> w1, w2;  // completed window means
  double s1 = 0.0, s2 = 0.0;
  long count = 0;
  auto observer = [&](double, const double* st) {
    s1 += st[0] * st[0] + st[1] * st[1];
    s2 += st[2] * st[2] + st[3] * st[3];
    if (++count == m) {
      w1.push_back(s1 / m);
      w2.push_back(s2 / m);
      s1 = s2 = 0.0;
      count = 0;
    }
  };
  dde::IntegrateOptions opt;
  opt.record = false;
  dde::integrate(6, p.tau, rhs, hist, run.h, transient + run.retain, opt, observer);

  SteadyState out;
  out.window = run.window;
  if (w1.size() < 2) throw DomainError("steady_state_intensity: run shorter than two windows");
  // Average every post-transient window, not just the last one: chaotic
  // regimes leave the 1 ns means fluctuating by tens of percent and the
  // sideband modulation is much smaller than that.
  const std::size_t k = std::min<std::size_t>(
      w1.size(), std::max<std::size_t>(1, std::lround(run.retain / run.window)));
  double a1 = 0.0, a2 = 0.0;
  for (std::size_t i = w1.size() - k; i < w1.size(); ++i) {
    a1 += w1[i];
    a2 += w2[i];
  }
  out.I1 = a1 / k;
  out.I2 = a2 / k;
  const double d1 = std::abs(w1.back() - w1[w1.size() - 2]) / std::max(w1.back(), 1e-15);
  const double d2 = std::abs(w2.back() - w2[w2.size() - 2]) / std::max(w2.back(), 1e-15);
  out.converged = d1 < 0.01 && d2 < 0.01;
  return out;
}

}  // namespace

SteadyState steady_state_intensity(const LKParams& p, const RunSettings& run) {
  if (run.transient + run.retain < 2.0 * run.window)
    throw DomainError("steady_state_intensity: run time below transient + window");
  SteadyState s = run_once(p, run, run.transient);
  if (!s.converged) s = run_once(p, run, 2.0 * run.transient);
  return s;
}

SweepProfile sweep_detuning(const LKParams& base, const std::vector<double>& detunings,
                            SweepVariant variant, const RunSettings& run, int workers) {
  for (std::size_t i = 1; i < detunings.size(); ++i)
    if (detunings[i] <= detunings[i - 1])
      throw DomainError("sweep_detuning: detuning grid must be sorted ascending");

  const double kappa = base.kappa();
  if (base.tau > 0.0 && !detunings.empty()) {
    const double spacing = std::numbers::pi / base.tau /
                           (variant == SweepVariant::FixedSecondLaser ? 2.0 : 1.0);
    const double usable = detunings.back() - 2.0 * kappa;
    if (usable / spacing < 20.0)
      std::cerr << "warning: detuning span covers " << std::max(0.0, usable / spacing)
                << " predicted sidebands beyond the dome (< 20)\n";
  }

  SweepProfile prof;
  prof.kappa = kappa;
  prof.tau = base.tau;
  prof.variant = variant;
  prof.detuning = detunings;
  const std::size_t n = detunings.size();
  prof.I1.assign(n, 0.0);
  prof.I2.assign(n, 0.0);
  prof.converged.assign(n, 0);
  prof.failed.assign(n, 0);
  prof.error.assign(n, std::string());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      LKParams p = base;
      p.variant = variant;
      p.delta_omega = detunings[i];
      RunSettings r = run;
      r.seed = splitmix64(run.seed ^ (0x51abULL + i));
      try {
        const SteadyState s = steady_state_intensity(p, r);
        prof.I1[i] = s.I1;
        prof.I2[i] = s.I2;
        prof.converged[i] = s.converged ? 1 : 0;
      } catch (const std::exception& e) {
        prof.failed[i] = 1;
        prof.error[i] = e.what();
      }
    }
  };
  const int nw = std::max(1, workers);
  if (nw == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return prof;
}

}  // namespace sideband::models
