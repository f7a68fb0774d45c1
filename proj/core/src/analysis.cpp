#include "sideband/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <numeric>

namespace sideband::analysis {

namespace {

constexpr double kPi = std::numbers::pi;

// Indices sorted by |detuning| descending.
std::vector<std::size_t> by_abs_detuning(const SweepProfile& p) {
  std::vector<std::size_t> idx(p.detuning.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(p.detuning[a]) > std::abs(p.detuning[b]);
  });
  return idx;
}

}  // namespace

SweepProfile normalize_profile(const SweepProfile& p) {
  if (p.detuning.empty()) throw DomainError("normalize_profile: empty profile");
  double max_abs = 0.0;
  for (double d : p.detuning) max_abs = std::max(max_abs, std::abs(d));
  if (max_abs <= 2.0 * p.kappa)
    throw InsufficientRangeError("normalize_profile: grid does not extend past the dome");

  const auto idx = by_abs_detuning(p);
  const std::size_t n_tail = std::max<std::size_t>(1, idx.size() / 10);
  double s1 = 0.0, s2 = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 0; k < idx.size() && used < n_tail; ++k) {
    if (p.failed.size() > idx[k] && p.failed[idx[k]]) continue;
    s1 += p.I1[idx[k]];
    s2 += p.I2[idx[k]];
    ++used;
  }
  if (used == 0 || s1 <= 0.0 || s2 <= 0.0)
    throw DomainError("normalize_profile: no usable tail points");

  SweepProfile out = p;
  out.norm1 = s1 / used;
  out.norm2 = s2 / used;
  out.I1_norm.resize(p.I1.size());
  out.I2_norm.resize(p.I2.size());
  for (std::size_t i = 0; i < p.I1.size(); ++i) {
    out.I1_norm[i] = p.I1[i] / out.norm1;
    out.I2_norm[i] = p.I2[i] / out.norm2;
  }
  out.normalized = true;
  return out;
}

double dome_edge(const SweepProfile& p) {
  if (!p.normalized) throw DomainError("dome_edge: profile must be normalized first");
  const auto idx = by_abs_detuning(p);
  auto bad = [&](std::size_t i) { return p.failed.size() > i && p.failed[i]; };
  const std::size_t n_tail = std::max<std::size_t>(2, idx.size() / 5);
  double amp = 1e-12;
  for (std::size_t k = 0; k < n_tail && k < idx.size(); ++k)
    if (!bad(idx[k])) amp = std::max(amp, std::abs(p.I1_norm[idx[k]] - 1.0));
  // The central dome cannot reach past ~kappa (its closed-form rate vanishes
  // at delta_omega = kappa), so violators beyond 2 kappa are sidebands with a
  // slowly decaying envelope, not dome. Restrict the scan accordingly.
  double edge = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (bad(idx[k])) continue;
    if (std::abs(p.detuning[idx[k]]) > 2.0 * p.kappa) continue;
    if (std::abs(p.I1_norm[idx[k]] - 1.0) > 2.0 * amp) {
      edge = std::abs(p.detuning[idx[k]]);
      break;  // outermost violator; everything beyond stays within band
    }
  }
  return edge;
}

SowEstimate extract_sow(const SweepProfile& profile) {
  const SweepProfile p = profile.normalized ? profile : normalize_profile(profile);
  const double edge = dome_edge(p);

  std::vector<double> x, y;
  for (std::size_t i = 0; i < p.detuning.size(); ++i) {
    if (p.detuning[i] <= edge) continue;
    x.push_back(p.detuning[i]);
    y.push_back(p.I1_norm[i]);
  }
  const std::size_t n = x.size();
  if (n < 16) throw InsufficientRangeError("extract_sow: too few points beyond the dome");
  const double dx = (x.back() - x.front()) / (n - 1);
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs((x[i] - x[i - 1]) - dx) > 1e-6 * dx + 1e-12)
      throw DomainError("extract_sow: detuning grid is not uniform");

  // Fill failed points by linear interpolation of the neighbors.
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t src = i + (p.detuning.size() - n);  // aligned tail indices
    if (p.failed.size() > src && p.failed[src]) {
      const double left = i > 0 ? y[i - 1] : 1.0;
      std::size_t j = i + 1;
      while (j < n && p.failed[j + (p.detuning.size() - n)]) ++j;
      const double right = j < n ? y[j] : 1.0;
      for (std::size_t k = i; k < j && k < n; ++k)
        y[k] = left + (right - left) * double(k - i + 1) / double(j - i + 1);
    }
  }

  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double hann = 0.5 * (1.0 - std::cos(2.0 * kPi * j / (n - 1)));
    w[j] = (y[j] - mean) * hann;
  }

  // Plain DFT magnitudes up to Nyquist; n is ~10^3 so O(n^2) is fine.
  const std::size_t n_bins = n / 2;
  std::vector<double> mag(n_bins + 1, 0.0);
  for (std::size_t k = 1; k <= n_bins; ++k) {
    double re = 0.0, im = 0.0;
    const double ang = -2.0 * kPi * k / n;
    for (std::size_t j = 0; j < n; ++j) {
      re += w[j] * std::cos(ang * j);
      im += w[j] * std::sin(ang * j);
    }
    mag[k] = std::hypot(re, im);
  }

  std::size_t km = 1;
  for (std::size_t k = 2; k <= n_bins; ++k)
    if (mag[k] > mag[km]) km = k;
  std::vector<double> sorted(mag.begin() + 1, mag.end());
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  if (!(mag[km] >= 3.0 * median))
    throw NoPeakError("extract_sow: spectrum has no dominant sideband peak");

  double delta = 0.0;
  if (km >= 2 && km + 1 <= n_bins && mag[km - 1] > 0.0 && mag[km + 1] > 0.0) {
    const double lm = std::log(mag[km - 1]), l0 = std::log(mag[km]), lp = std::log(mag[km + 1]);
    const double denom = lm - 2.0 * l0 + lp;
    if (denom < 0.0) delta = 0.5 * (lm - lp) / denom;
  }
  const double freq = (km + delta) / (n * dx);  // cycles per rad/ns

  // Half-maximum crossings of the peak, linearly interpolated.
  const double half = 0.5 * mag[km];
  double k_lo = 1.0, k_hi = static_cast<double>(n_bins);
  for (std::size_t k = km; k-- > 1;) {
    if (mag[k] < half) {
      k_lo = k + (half - mag[k]) / (mag[k + 1] - mag[k]);
      break;
    }
  }
  for (std::size_t k = km + 1; k <= n_bins; ++k) {
    if (mag[k] < half) {
      k_hi = k - 1 + (mag[k - 1] - half) / (mag[k - 1] - mag[k]);
      break;
    }
  }
  const double f_lo = std::max(k_lo, 0.25) / (n * dx);
  const double f_hi = k_hi / (n * dx);

  SowEstimate est;
  est.value = 1.0 / freq;
  est.fwhm_error = std::max(0.0, 1.0 / f_lo - 1.0 / f_hi);
  est.dome_edge = edge;
  est.n_sidebands_used = static_cast<int>(std::floor((x.back() - x.front()) * freq));
  if (est.n_sidebands_used < 10)
    throw InsufficientRangeError("extract_sow: fewer than 10 sidebands beyond the dome");
  if (est.n_sidebands_used < 20)
    std::cerr << "warning: extract_sow used only " << est.n_sidebands_used
              << " sidebands (< 20)\n";
  return est;
}

SowReport compare_sow(const SowEstimate& e, double /*kappa*/, double tau,
                      SweepVariant variant) {
  SowReport r;
  r.measured = e.value;
  r.predicted = variant == SweepVariant::FixedSecondLaser ? kPi / (2.0 * tau) : kPi / tau;
  r.rel_dev = (r.measured - r.predicted) / r.predicted;
  r.within_error = std::abs(r.measured - r.predicted) <= e.fwhm_error;
  return r;
}

}  // namespace sideband::analysis
