#include <cmath>

#include <doctest.h>

#include "sideband/lambert_w.hpp"

using sideband::DomainError;
using sideband::lambert_w;
using sideband::WBranch;

namespace {

// Independent oracle: bisection on w*e^w - x over a bracketing interval.
double bisect_w(double x, double lo, double hi) {
  auto f = [&](double w) { return w * std::exp(w) - x; };
  REQUIRE(f(lo) * f(hi) <= 0.0);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(lo) * f(mid) <= 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("principal branch fixed points") {
  CHECK(lambert_w(WBranch::principal, 0.0) == 0.0);
  CHECK(lambert_w(WBranch::principal, std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("branch point returns -1 on both branches") {
  const double bp = -std::exp(-1.0);
  CHECK(lambert_w(WBranch::principal, bp) == -1.0);
  CHECK(lambert_w(WBranch::lower, bp) == -1.0);
}

TEST_CASE("bisection oracle at x = 1.5") {
  const double w = lambert_w(WBranch::principal, 1.5);
  CHECK(w == doctest::Approx(bisect_w(1.5, 0.0, 2.0)).epsilon(1e-13));
  CHECK(std::abs(w * std::exp(w) - 1.5) <= 1e-13 * 1.5);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(lambert_w(WBranch::principal, -1.0), DomainError);
  CHECK_THROWS_AS(lambert_w(WBranch::lower, -0.5), DomainError);
  CHECK_THROWS_AS(lambert_w(WBranch::lower, 0.0), DomainError);
  CHECK_THROWS_AS(lambert_w(WBranch::lower, 0.1), DomainError);
}

TEST_CASE("residual certificate across both branches") {
  for (int i = 0; i <= 2000; ++i) {
    const double x = -std::exp(-1.0) + 1e-10 + i * (5.0 + std::exp(-1.0)) / 2000.0;
    const double w = lambert_w(WBranch::principal, x);
    CHECK(std::abs(w * std::exp(w) - x) <= 1e-13 * std::max(1.0, std::abs(x)));
    CHECK(w >= -1.0);
  }
  for (int i = 1; i <= 2000; ++i) {
    const double x = (-std::exp(-1.0) + 1e-10) * i / 2000.0;
    const double w = lambert_w(WBranch::lower, x);
    CHECK(std::abs(w * std::exp(w) - x) <= 1e-13 * std::max(1.0, std::abs(x)));
    CHECK(w <= -1.0);
  }
}

TEST_CASE("branch ordering on (-1/e, 0)") {
  for (double x : {-0.3, -0.2, -0.1, -0.05, -0.01}) {
    const double w0 = lambert_w(WBranch::principal, x);
    const double wm = lambert_w(WBranch::lower, x);
    CHECK(wm < -1.0);
    CHECK(w0 > -1.0);
    CHECK(w0 <= 0.0);
  }
}

TEST_CASE("round-trip over a dense w grid") {
  for (int i = 0; i <= 1100; ++i) {
    const double w = -8.0 + 11.0 * i / 1100.0;
    if (std::abs(w + 1.0) < 1e-3) continue;  // ill-conditioned at the branch point
    const double x = w * std::exp(w);
    const WBranch branch = w > -1.0 ? WBranch::principal : WBranch::lower;
    CHECK(lambert_w(branch, x) == doctest::Approx(w).epsilon(1e-12));
  }
}
