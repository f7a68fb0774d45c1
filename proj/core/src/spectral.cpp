#include "sideband/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sideband/lambert_w.hpp"

namespace sideband::spectral {

namespace {

constexpr double kPi = std::numbers::pi;

Complex char_deriv(Complex lambda, const SpectralParams& p) {
  const Complex expf = std::exp(-2.0 * lambda * p.tau);
  return 2.0 * lambda + 2.0 * p.tau * p.kappa * p.kappa * phase_factor_sq(p) * expf;
}

// Magnitude scale of the characteristic function near lambda, used as the
// floating-point floor for residual certificates.
double residual_scale(Complex lambda, const SpectralParams& p) {
  const double a = std::norm(lambda);
  const double b = p.delta_omega * p.delta_omega;
  const double c = p.kappa * p.kappa * std::exp(-2.0 * lambda.real() * p.tau);
  return a + b + c;
}

double accept_tol(Complex lambda, const SpectralParams& p) {
  return std::max(1e-9 * p.kappa * p.kappa, 1e-13 * residual_scale(lambda, p));
}

// Newton refinement; returns true on convergence.
bool newton(Complex& lambda, const SpectralParams& p) {
  for (int it = 0; it < 80; ++it) {
    const Complex f = char_residual(lambda, p);
    const Complex df = char_deriv(lambda, p);
    if (std::abs(df) == 0.0) return false;
    const Complex step = f / df;
    lambda -= step;
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) return false;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(lambda))) {
      return std::abs(char_residual(lambda, p)) <= accept_tol(lambda, p);
    }
  }
  return std::abs(char_residual(lambda, p)) <= accept_tol(lambda, p);
}

double window_scale(const SpectralParams& p) {
  double s = p.kappa;
  if (p.tau > 0.0) s = std::max(s, 1.0 / p.tau);
  return std::max(s, 1e-30);
}

struct ArgTracker {
  double total = 0.0;
  void refine(Complex f1, Complex f2, Complex l1, Complex l2, const SpectralParams& p,
              int depth) {
    const double dphi = std::arg(f2 / f1);
    if (std::abs(dphi) <= 1.0 || depth >= 28) {
      total += dphi;
      return;
    }
    const Complex lm = 0.5 * (l1 + l2);
    const Complex fm = char_residual(lm, p);
    if (std::abs(fm) == 0.0) throw WindowBoundaryError("root on window boundary");
    refine(f1, fm, l1, lm, p, depth + 1);
    refine(fm, f2, lm, l2, p, depth + 1);
  }
};

std::vector<Eigenvalue> scan_and_refine(const SpectralParams& p, const SearchWindow& w,
                                        double cell) {
  const int nu = std::max(2, static_cast<int>(std::ceil((w.u_max - w.u_min) / cell)));
  const int nv = std::max(2, static_cast<int>(std::ceil((w.v_max - w.v_min) / cell)));
  const double du = (w.u_max - w.u_min) / nu;
  const double dv = (w.v_max - w.v_min) / nv;

  // Node values of the characteristic function on the scan grid.
  std::vector<Complex> node((nu + 1) * (nv + 1));
  for (int i = 0; i <= nu; ++i)
    for (int j = 0; j <= nv; ++j)
      node[i * (nv + 1) + j] =
          char_residual({w.u_min + i * du, w.v_min + j * dv}, p);

  const double dedup = 1e-6 * window_scale(p);
  const double boundary_tol = 1e-7 * window_scale(p);
  std::vector<Eigenvalue> roots;

  auto try_seed = [&](Complex seed) {
    Complex lam = seed;
    if (!newton(lam, p)) return;
    const double u = lam.real(), v = lam.imag();
    const double din = std::min(std::min(u - w.u_min, w.u_max - u),
                                std::min(v - w.v_min, w.v_max - v));
    if (std::abs(din) <= boundary_tol)
      throw WindowBoundaryError("characteristic root within tolerance of the search window boundary");
    if (din < 0.0) return;  // converged outside the window
    for (const auto& r : roots)
      if (std::hypot(r.u - u, r.v - v) <= dedup) return;
    roots.push_back({u, v, std::abs(char_residual(lam, p))});
  };

  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      const Complex c00 = node[i * (nv + 1) + j];
      const Complex c01 = node[i * (nv + 1) + j + 1];
      const Complex c10 = node[(i + 1) * (nv + 1) + j];
      const Complex c11 = node[(i + 1) * (nv + 1) + j + 1];
      auto sign_change = [](double a, double b, double c, double d) {
        const double mx = std::max(std::max(a, b), std::max(c, d));
        const double mn = std::min(std::min(a, b), std::min(c, d));
        return mx >= 0.0 && mn <= 0.0;
      };
      if (!sign_change(c00.real(), c01.real(), c10.real(), c11.real())) continue;
      if (!sign_change(c00.imag(), c01.imag(), c10.imag(), c11.imag())) continue;
      const Complex center{w.u_min + (i + 0.5) * du, w.v_min + (j + 0.5) * dv};
      try_seed(center);
      try_seed({center.real() - 0.4 * du, center.imag() - 0.4 * dv});
      try_seed({center.real() + 0.4 * du, center.imag() + 0.4 * dv});
    }
  }
  std::sort(roots.begin(), roots.end(), [](const Eigenvalue& a, const Eigenvalue& b) {
    return a.u != b.u ? a.u > b.u : a.v < b.v;
  });
  return roots;
}

}  // namespace

Complex phase_factor_sq(const SpectralParams& p) {
  if (p.variant == SweepVariant::SymmetricLTau) return {1.0, 0.0};
  // omega_1 - delta_omega = omega_2 + delta_omega = omega_0
  const double omega0 = p.omega_fixed + p.delta_omega;
  return std::exp(Complex(0.0, -2.0 * omega0 * p.tau));
}

Complex char_residual(Complex lambda, const SpectralParams& p) {
  const Complex expf = std::exp(-2.0 * lambda * p.tau);
  return lambda * lambda + p.delta_omega * p.delta_omega -
         p.kappa * p.kappa * phase_factor_sq(p) * expf;
}

double contour_F(double u, double v, const SpectralParams& p) {
  if (p.variant != SweepVariant::SymmetricLTau)
    throw DomainError("contour_F: defined for the symmetric sweep only");
  return u * u - v * v + p.delta_omega * p.delta_omega -
         p.kappa * p.kappa * std::exp(-2.0 * u * p.tau) * std::cos(2.0 * v * p.tau);
}

double contour_G(double u, double v, const SpectralParams& p) {
  if (p.variant != SweepVariant::SymmetricLTau)
    throw DomainError("contour_G: defined for the symmetric sweep only");
  return 2.0 * u * v +
         p.kappa * p.kappa * std::exp(-2.0 * u * p.tau) * std::sin(2.0 * v * p.tau);
}

std::optional<std::pair<double, double>> g_double_zeros(double kappa, double tau) {
  if (kappa <= 0.0 || tau <= 0.0) throw DomainError("g_double_zeros: needs kappa, tau > 0");
  const double x = -2.0 * kappa * kappa * tau * tau;
  if (x + std::exp(-1.0) < 0.0) return std::nullopt;  // kappa*tau above 1/sqrt(2e)
  const double u0 = lambert_w(WBranch::principal, x) / (2.0 * tau);
  const double u1 = lambert_w(WBranch::lower, x) / (2.0 * tau);
  return std::make_pair(u0, u1);
}

std::pair<Complex, Complex> markovian_eigenvalues(double kappa, double delta_omega) {
  const double d = kappa * kappa - delta_omega * delta_omega;
  if (d >= 0.0) {
    const double r = std::sqrt(d);
    return {Complex(r, 0.0), Complex(-r, 0.0)};
  }
  const double s = std::sqrt(-d);
  return {Complex(0.0, s), Complex(0.0, -s)};
}

int winding_number(const SpectralParams& p, const SearchWindow& w) {
  const Complex corners[5] = {{w.u_min, w.v_min},
                              {w.u_max, w.v_min},
                              {w.u_max, w.v_max},
                              {w.u_min, w.v_max},
                              {w.u_min, w.v_min}};
  ArgTracker tracker;
  constexpr int kPerSide = 256;
  Complex prev_l = corners[0];
  Complex prev_f = char_residual(prev_l, p);
  for (int side = 0; side < 4; ++side) {
    for (int k = 1; k <= kPerSide; ++k) {
      const double s = static_cast<double>(k) / kPerSide;
      const Complex l = corners[side] + s * (corners[side + 1] - corners[side]);
      const Complex f = char_residual(l, p);
      if (std::abs(f) == 0.0) throw WindowBoundaryError("root on window boundary");
      tracker.refine(prev_f, f, prev_l, l, p, 0);
      prev_l = l;
      prev_f = f;
    }
  }
  const double turns = tracker.total / (2.0 * kPi);
  const int n = static_cast<int>(std::lround(turns));
  if (std::abs(turns - n) > 0.05)
    throw NonConvergenceError("winding number did not settle to an integer");
  return n;
}

std::vector<Eigenvalue> find_eigenvalues(const SpectralParams& p, const SearchWindow& w) {
  if (!(w.u_min < w.u_max) || !(w.v_min < w.v_max))
    throw DomainError("find_eigenvalues: empty search window");
  if (p.tau > 0.0 && w.seed_spacing > kPi / (4.0 * p.tau) * (1.0 + 1e-12))
    throw DomainError("find_eigenvalues: seed spacing above pi/(4 tau)");

  if (p.tau == 0.0) {
    // The transcendental machinery degenerates; use the closed form.
    const auto [lp, lm] = markovian_eigenvalues(p.kappa, p.delta_omega);
    const double boundary_tol = 1e-7 * std::max(p.kappa, 1e-30);
    std::vector<Eigenvalue> roots;
    for (Complex lam : {lp, lm}) {
      const double u = lam.real(), v = lam.imag();
      const double din = std::min(std::min(u - w.u_min, w.u_max - u),
                                  std::min(v - w.v_min, w.v_max - v));
      if (std::abs(din) <= boundary_tol)
        throw WindowBoundaryError("Markovian eigenvalue on the window boundary");
      if (din < 0.0) continue;
      bool dup = false;
      for (const auto& r : roots)
        dup = dup || std::hypot(r.u - u, r.v - v) <= 1e-12 * std::max(1.0, p.kappa);
      if (!dup) roots.push_back({u, v, std::abs(char_residual(lam, p))});
    }
    return roots;
  }

  const int expected = winding_number(p, w);
  double cell = w.seed_spacing;
  cell = std::min(cell, kPi / (8.0 * p.tau));
  for (int attempt = 0; attempt < 4; ++attempt) {
    auto roots = scan_and_refine(p, w, cell);
    if (static_cast<int>(roots.size()) == expected) return roots;
    cell *= 0.5;  // missed or spurious roots; rescan finer
  }
  throw NonConvergenceError("root count disagrees with the argument-principle winding number");
}

SearchWindow default_window(const SpectralParams& p) {
  const double inv_tau = p.tau > 0.0 ? 1.0 / p.tau : std::max(p.kappa, 1.0);
  SearchWindow w;
  w.u_min = -3.0 * p.kappa - 2.0 * inv_tau;
  w.u_max = p.kappa > 0.0 ? 2.0 * p.kappa : 0.1 * inv_tau;
  const double vmax = std::abs(p.delta_omega) + 4.0 * kPi * inv_tau;
  w.v_min = -vmax;
  w.v_max = vmax;
  w.seed_spacing = p.tau > 0.0 ? kPi / (8.0 * p.tau) : 0.25 * std::max(p.kappa, 1.0);
  return w;
}

double dominant_rate(const SpectralParams& p, const SearchWindow& w) {
  const auto roots = find_eigenvalues(p, w);
  if (roots.empty()) throw NonConvergenceError("dominant_rate: no roots in window");
  double u = roots.front().u;
  for (const auto& r : roots) u = std::max(u, r.u);
  return u;
}

double dominant_rate(const SpectralParams& p) { return dominant_rate(p, default_window(p)); }

std::optional<double> central_dome_rate(double kappa, double tau, double delta_omega) {
  if (kappa <= 0.0 || tau <= 0.0) throw DomainError("central_dome_rate: needs kappa, tau > 0");
  const double dw = std::abs(delta_omega);
  if (dw >= kappa) return std::nullopt;  // beyond the dome edge
  const double w0 = lambert_w(WBranch::principal, kappa * tau);
  if (dw == 0.0) return w0 / tau;
  double z_hi = std::min(w0, std::log(kappa / dw));
  auto g = [&](double z) {
    const double arg = 1.0 - std::pow(dw * std::exp(z) / kappa, 2);
    return z * std::exp(z) - kappa * tau * std::sqrt(std::max(0.0, arg));
  };
  double lo = 0.0, hi = z_hi;
  if (g(lo) > 0.0) return 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) <= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) / tau;
}

double find_rate_crossing(SpectralParams p, double dw_lo, double dw_hi, double tol_dw) {
  auto rate = [&](double dw) {
    p.delta_omega = dw;
    return dominant_rate(p);
  };
  double f_lo = rate(dw_lo);
  const double f_hi = rate(dw_hi);
  if ((f_lo > 0.0) == (f_hi > 0.0))
    throw DomainError("find_rate_crossing: no sign change in the bracket");
  double lo = dw_lo, hi = dw_hi;
  while (hi - lo > tol_dw) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = rate(mid);
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<std::pair<int, double>> transition_detunings(double kappa, double tau, int n_max) {
  if (tau <= 0.0) throw DomainError("transition_detunings: needs tau > 0");
  if (n_max < 2) throw DomainError("transition_detunings: needs n_max >= 2");
  std::vector<std::pair<int, double>> out;
  for (int n = 2; n <= n_max; n += 2) {
    const double vn = n * kPi / (2.0 * tau);
    out.emplace_back(n, std::sqrt(vn * vn + kappa * kappa));
  }
  return out;
}

double sow_predicted(double kappa, double tau, int n, SweepVariant variant) {
  if (tau <= 0.0) throw DomainError("sow_predicted: needs tau > 0");
  if (n < 2 || n % 2 != 0) throw DomainError("sow_predicted: needs even n >= 2");
  const double sow = kPi / tau - kappa * kappa * tau / (kPi * n * (n + 2));
  return variant == SweepVariant::FixedSecondLaser ? 0.5 * sow : sow;
}

}  // namespace sideband::spectral
