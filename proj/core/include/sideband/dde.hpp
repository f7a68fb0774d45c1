#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "sideband/errors.hpp"

namespace sideband::dde {

// Dense fixed-step output. Row i is the state at times[i].
struct Trajectory {
  std::size_t dim = 0;
  double h = 0.0;
  std::vector<double> times;
  std::vector<double> data;  // times.size() * dim, row-major

  std::span<const double> state(std::size_t i) const {
    return {data.data() + i * dim, dim};
  }
  std::size_t size() const { return times.size(); }
};

struct IntegrateOptions {
  bool record = true;          // retain samples in the Trajectory
  double record_from = 0.0;    // discard samples before this time
  std::size_t record_stride = 1;
};

struct NoObserver {
  void operator()(double, const double*) const {}
};

namespace detail {

// Ring buffer of (state, derivative) samples on the uniform step grid.
// Node j corresponds to time j*h (j negative inside the seeded history).
class StepHistory {
 public:
  StepHistory(std::size_t dim, double h, long j_min, std::size_t capacity)
      : dim_(dim), h_(h), j_min_(j_min), j_max_(j_min - 1), cap_(capacity),
        y_(capacity * dim), dy_(capacity * dim) {}

  // Appends node j (must be j_max+1 or the very first node); returns the
  // state slot to fill. Old nodes beyond the capacity are dropped.
  double* push(long j) {
    j_max_ = j;
    if (j - j_min_ >= static_cast<long>(cap_)) j_min_ = j - static_cast<long>(cap_) + 1;
    return y_.data() + slot(j) * dim_;
  }
  double* ystate(long j) { return y_.data() + slot(j) * dim_; }
  double* dy(long j) { return dy_.data() + slot(j) * dim_; }

  // Cubic Hermite interpolation at time t. Queries outside the retained
  // segment indicate broken step scheduling and throw.
  void eval(double t, double* out) const {
    const double jf = t / h_;
    long j = static_cast<long>(std::floor(jf));
    double s = jf - j;
    if (j + 1 > j_max_) {  // at the newest node, or rounding spill
      j = j_max_ - 1;
      s = jf - j;
      if (s > 1.0 + 1e-6)
        throw Error("delay history: interpolation query beyond the stored segment");
    }
    if (j < j_min_)
      throw Error("delay history: interpolation query before the stored segment");
    const double* y0 = y_.data() + slot(j) * dim_;
    const double* y1 = y_.data() + slot(j + 1) * dim_;
    const double* d0 = dy_.data() + slot(j) * dim_;
    const double* d1 = dy_.data() + slot(j + 1) * dim_;
    const double s2 = s * s, s3 = s2 * s;
    const double a = 2 * s3 - 3 * s2 + 1, b = s3 - 2 * s2 + s;
    const double c = -2 * s3 + 3 * s2, d = s3 - s2;
    for (std::size_t k = 0; k < dim_; ++k)
      out[k] = a * y0[k] + h_ * b * d0[k] + c * y1[k] + h_ * d * d1[k];
  }

 private:
  std::size_t slot(long j) const {
    long m = j % static_cast<long>(cap_);
    return static_cast<std::size_t>(m < 0 ? m + static_cast<long>(cap_) : m);
  }
  std::size_t dim_;
  double h_;
  long j_min_, j_max_;
  std::size_t cap_;
  std::vector<double> y_, dy_;
};

inline bool all_finite(const double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k)
    if (!std::isfinite(y[k])) return false;
  return true;
}

}  // namespace detail

// Integrates y'(t) = rhs(t, y(t), y(t - tau)) with classic RK4 and a fixed
// step h over [0, t_end]. Delayed states at the internal stages come from
// cubic Hermite interpolation of the stored step grid.
//
//   rhs(t, y, y_delayed, dydt)   writes dim derivatives
//   history(t, y)                state on [-ceil(tau/h)*h, 0]
//   observe(t, y)                called at t=0 and after every step
//
// Requires h > 0 and, for tau > 0, h <= tau/4. History derivatives are
// seeded by fourth-order finite differences of the sampled history.
template <class Rhs, class History, class Observer = NoObserver>
Trajectory integrate(std::size_t dim, double tau, Rhs&& rhs, History&& history,
                     double h, double t_end, const IntegrateOptions& opt = {},
                     Observer&& observe = Observer{}) {
  if (h <= 0.0) throw StepSizeError("integrate: step size must be positive");
  if (tau < 0.0) throw DomainError("integrate: negative delay");
  if (t_end <= 0.0) throw DomainError("integrate: t_end must be positive");
  if (tau > 0.0 && h > tau / 4.0 * (1.0 + 1e-12))
    throw StepSizeError("integrate: need h <= tau/4 for a delayed system");

  const long n_steps = static_cast<long>(std::ceil(t_end / h - 1e-9));
  const bool delayed = tau > 0.0;
  const long n_h = delayed ? static_cast<long>(std::ceil(tau / h - 1e-9)) : 0;

  Trajectory traj;
  traj.dim = dim;
  traj.h = h;
  if (opt.record) {
    const std::size_t cap = static_cast<std::size_t>(n_steps) / opt.record_stride + 2;
    traj.times.reserve(cap);
    traj.data.reserve(cap * dim);
  }
  auto record = [&](long step, double t, const double* y) {
    if (!opt.record) return;
    if (t < opt.record_from - 1e-12) return;
    if (step % static_cast<long>(opt.record_stride) != 0) return;
    traj.times.push_back(t);
    traj.data.insert(traj.data.end(), y, y + dim);
  };

  detail::StepHistory hist(dim, h, -n_h, static_cast<std::size_t>(n_h) + 8);

  std::vector<double> y(dim);
  if (delayed) {
    for (long j = -n_h; j <= 0; ++j) history(j * h, hist.push(j));
    // Derivatives on the seeded segment: fourth-order finite differences,
    // one-sided at the ends (n_h >= 4 is guaranteed by the h <= tau/4 check).
    for (long j = -n_h; j <= 0; ++j) {
      long base;
      double w[5];
      if (j - 2 >= -n_h && j + 2 <= 0) {
        base = j - 2;
        w[0] = 1.0 / 12; w[1] = -8.0 / 12; w[2] = 0.0; w[3] = 8.0 / 12; w[4] = -1.0 / 12;
      } else if (j + 4 <= 0) {
        base = j;
        w[0] = -25.0 / 12; w[1] = 4.0; w[2] = -3.0; w[3] = 4.0 / 3; w[4] = -1.0 / 4;
      } else {
        base = j - 4;
        w[0] = 1.0 / 4; w[1] = -4.0 / 3; w[2] = 3.0; w[3] = -4.0; w[4] = 25.0 / 12;
      }
      double* d = hist.dy(j);
      for (std::size_t k = 0; k < dim; ++k) {
        double acc = 0.0;
        for (int m = 0; m < 5; ++m) acc += w[m] * hist.ystate(base + m)[k];
        d[k] = acc / h;
      }
    }
    const double* y0 = hist.ystate(0);
    std::copy(y0, y0 + dim, y.begin());
  } else {
    history(0.0, y.data());
  }

  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), ytmp(dim);
  std::vector<double> yd1(dim), yd2(dim), yd4(dim);

  observe(0.0, y.data());
  record(0, 0.0, y.data());

  for (long step = 0; step < n_steps; ++step) {
    const double t = step * h;
    if (delayed) {
      hist.eval(t - tau, yd1.data());
      rhs(t, y.data(), yd1.data(), k1.data());
      // the exact node derivative doubles as the Hermite slope from here on
      std::copy(k1.begin(), k1.end(), hist.dy(step));
      hist.eval(t + 0.5 * h - tau, yd2.data());
      for (std::size_t k = 0; k < dim; ++k) ytmp[k] = y[k] + 0.5 * h * k1[k];
      rhs(t + 0.5 * h, ytmp.data(), yd2.data(), k2.data());
      for (std::size_t k = 0; k < dim; ++k) ytmp[k] = y[k] + 0.5 * h * k2[k];
      rhs(t + 0.5 * h, ytmp.data(), yd2.data(), k3.data());
      hist.eval(t + h - tau, yd4.data());
      for (std::size_t k = 0; k < dim; ++k) ytmp[k] = y[k] + h * k3[k];
      rhs(t + h, ytmp.data(), yd4.data(), k4.data());
    } else {
      rhs(t, y.data(), y.data(), k1.data());
      for (std::size_t k = 0; k < dim; ++k) ytmp[k] = y[k] + 0.5 * h * k1[k];
      rhs(t + 0.5 * h, ytmp.data(), ytmp.data(), k2.data());
      for (std::size_t k = 0; k < dim; ++k) ytmp[k] = y[k] + 0.5 * h * k2[k];
      rhs(t + 0.5 * h, ytmp.data(), ytmp.data(), k3.data());
      for (std::size_t k = 0; k < dim; ++k) ytmp[k] = y[k] + h * k3[k];
      rhs(t + h, ytmp.data(), ytmp.data(), k4.data());
    }
    for (std::size_t k = 0; k < dim; ++k)
      y[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    const double t_next = (step + 1) * h;
    if (!detail::all_finite(y.data(), dim))
      throw NonFiniteStateError("integrate: state became non-finite", t_next);
    if (delayed) {
      double* slot = hist.push(step + 1);
      std::copy(y.begin(), y.end(), slot);
    }
    observe(t_next, y.data());
    record(step + 1, t_next, y.data());
  }
  return traj;
}

}  // namespace sideband::dde
