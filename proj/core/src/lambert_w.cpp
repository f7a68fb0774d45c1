#include "sideband/lambert_w.hpp"

#include <cmath>

namespace sideband {

namespace {

constexpr double kInvE = 0.36787944117144232160;  // 1/e

// Series about the branch point x = -1/e, w = -1. p = +-sqrt(2(e x + 1)).
double branch_point_series(double p) {
  return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0))));
}

double halley(double w, double x) {
  for (int it = 0; it < 64; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double dw = f / denom;
    w -= dw;
    if (std::abs(dw) <= 1e-16 * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace

double lambert_w(WBranch branch, double x) {
  if (!std::isfinite(x)) throw DomainError("lambert_w: non-finite argument");
  const double xe = x + kInvE;
  if (xe < -1e-12) throw DomainError("lambert_w: x < -1/e has no real solution");
  // At the branch point both branches meet; iteration stagnates there.
  if (std::abs(xe) < 1e-12) return -1.0;

  double w0;
  if (branch == WBranch::principal) {
    if (x < -0.25) {
      w0 = branch_point_series(std::sqrt(2.0 * std::exp(1.0) * xe));
    } else if (x < 3.0) {
      w0 = std::log1p(x) * (1.0 - std::log1p(std::log1p(x)) / (2.0 + std::log1p(x)));
    } else {
      const double l1 = std::log(x);
      const double l2 = std::log(l1);
      w0 = l1 - l2 + l2 / l1;
    }
  } else {
    if (x >= 0.0) throw DomainError("lambert_w: branch -1 needs x < 0");
    if (x < -0.25) {
      w0 = branch_point_series(-std::sqrt(2.0 * std::exp(1.0) * xe));
    } else {
      const double l1 = std::log(-x);
      const double l2 = std::log(-l1);
      w0 = l1 - l2 + l2 / l1;
    }
  }
  double w = halley(w0, x);
  // Clamp onto the branch in case rounding crossed w = -1.
  if (branch == WBranch::principal && w < -1.0) w = -1.0;
  if (branch == WBranch::lower && w > -1.0) w = -1.0;
  return w;
}

}  // namespace sideband
