#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "sideband/lambert_w.hpp"
#include "sideband/spectral.hpp"

using namespace sideband;
using namespace sideband::spectral;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralParams sym(double dw, double kappa, double tau) {
  return {dw, kappa, tau, SweepVariant::SymmetricLTau, 0.0};
}

// Independent oracle: sign-change cells of F and G on a fine grid. Returns
// approximate root locations (cell centers where both functions straddle 0).
std::vector<Complex> grid_scan_oracle(const SpectralParams& p, const SearchWindow& w,
                                      int n) {
  std::vector<Complex> hits;
  const double du = (w.u_max - w.u_min) / n;
  const double dv = (w.v_max - w.v_min) / n;
  std::vector<double> f((n + 1) * (n + 1)), g((n + 1) * (n + 1));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      const double u = w.u_min + i * du, v = w.v_min + j * dv;
      f[i * (n + 1) + j] = contour_F(u, v, p);
      g[i * (n + 1) + j] = contour_G(u, v, p);
    }
  auto straddles = [&](const std::vector<double>& a, int i, int j) {
    const double v00 = a[i * (n + 1) + j], v01 = a[i * (n + 1) + j + 1];
    const double v10 = a[(i + 1) * (n + 1) + j], v11 = a[(i + 1) * (n + 1) + j + 1];
    return std::max({v00, v01, v10, v11}) >= 0.0 && std::min({v00, v01, v10, v11}) <= 0.0;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (straddles(f, i, j) && straddles(g, i, j))
        hits.emplace_back(w.u_min + (i + 0.5) * du, w.v_min + (j + 0.5) * dv);
  // Merge contiguous hit cells into clusters.
  std::vector<Complex> clusters;
  const double merge = 3.0 * std::hypot(du, dv);
  for (const auto& h : hits) {
    bool merged = false;
    for (auto& c : clusters)
      if (std::abs(c - h) < merge) {
        merged = true;
        break;
      }
    if (!merged) clusters.push_back(h);
  }
  return clusters;
}

}  // namespace

TEST_CASE("characteristic residual closed-form zeros") {
  // Markovian eigenvalue +kappa
  CHECK(std::abs(char_residual({2.0, 0.0}, sym(0.0, 2.0, 0.0))) == 0.0);
  // decoupled mode at lambda = i dw
  CHECK(std::abs(char_residual({0.0, 1.7}, sym(1.7, 0.0, 2.0))) < 1e-14);
  // u+ = W0(kappa tau)/tau at zero detuning
  const double kappa = 1.3, tau = 1.9;
  const double up = lambert_w(WBranch::principal, kappa * tau) / tau;
  CHECK(std::abs(char_residual({up, 0.0}, sym(0.0, kappa, tau))) < 1e-13 * kappa * kappa);
}

TEST_CASE("contour_F values") {
  const auto p = sym(0.8, 0.8, 1.1);
  CHECK(contour_F(0.0, 0.0, p) == doctest::Approx(0.0).epsilon(1e-14));
  // hyperbola asymptote at large u*tau
  const double u = 8.0 / p.tau;
  const double v = std::sqrt(u * u + p.delta_omega * p.delta_omega);
  CHECK(std::abs(contour_F(u, v, p)) < 1e-4 * u * u);
  // axis section: F(0, v) = -v^2 + dw^2 - k^2 cos(2 v tau)
  for (double v2 : {0.3, 1.4, 2.9}) {
    const double expect = -v2 * v2 + p.delta_omega * p.delta_omega -
                          p.kappa * p.kappa * std::cos(2.0 * v2 * p.tau);
    CHECK(contour_F(0.0, v2, p) == doctest::Approx(expect).epsilon(1e-14));
  }
  CHECK_THROWS_AS(contour_F(0, 0, SpectralParams{0, 1, 1, SweepVariant::FixedSecondLaser, 0}),
                  DomainError);
}

TEST_CASE("contour_G axis and branch lines") {
  const auto p = sym(0.5, 1.2, 0.7);
  for (double u : {-2.0, -0.5, 0.0, 0.5, 2.0}) CHECK(contour_G(u, 0.0, p) == 0.0);
  for (int m : {-3, -1, 1, 2, 5}) {
    const double vm = m * kPi / (2.0 * p.tau);
    CHECK(std::abs(contour_G(0.0, vm, p)) < 1e-12 * p.kappa * p.kappa * std::abs(m));
  }
  CHECK(contour_G(1.0, 1.0, sym(0.3, 0.0, 0.7)) == doctest::Approx(2.0));
}

TEST_CASE("g_double_zeros against a bisection oracle") {
  const double tau = 1.0;
  SUBCASE("two roots below the threshold") {
    const double kappa = 0.2;
    const auto roots = g_double_zeros(kappa, tau);
    REQUIRE(roots.has_value());
    auto [u0, u1] = *roots;
    CHECK(u1 < u0);
    CHECK(u0 < 0.0);
    // oracle: bisection on z e^z + 2 (kappa tau)^2 over the two z ranges
    auto f = [&](double z) { return z * std::exp(z) + 2.0 * kappa * kappa * tau * tau; };
    auto bisect = [&](double lo, double hi) {
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(lo) * f(mid) <= 0.0 ? hi : lo) = mid;
      }
      return 0.5 * (lo + hi);
    };
    CHECK(u0 == doctest::Approx(bisect(-1.0, 0.0) / (2.0 * tau)).epsilon(1e-12));
    CHECK(u1 == doctest::Approx(bisect(-40.0, -1.0) / (2.0 * tau)).epsilon(1e-12));
  }
  SUBCASE("empty above the threshold") {
    CHECK(!g_double_zeros(0.6, tau).has_value());
  }
  SUBCASE("small-coupling leading order u0 -> -kappa^2 tau") {
    const double kappa = 1e-4;
    const auto roots = g_double_zeros(kappa, tau);
    REQUIRE(roots.has_value());
    CHECK(roots->first == doctest::Approx(-kappa * kappa * tau).epsilon(1e-3));
  }
}

TEST_CASE("markovian eigenvalues") {
  auto [lp, lm] = markovian_eigenvalues(1.0, 0.0);
  CHECK(lp == Complex(1.0, 0.0));
  CHECK(lm == Complex(-1.0, 0.0));
  auto [zp, zm] = markovian_eigenvalues(2.0, 2.0);
  CHECK(zp == Complex(0.0, 0.0));
  CHECK(zm == Complex(0.0, 0.0));
  auto [ip, im] = markovian_eigenvalues(1.0, 2.0);
  CHECK(ip.real() == 0.0);
  CHECK(ip.imag() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(im == -ip);
}

TEST_CASE("find_eigenvalues in the Markovian limit") {
  const double kappa = 1.4;
  SearchWindow w{-2.0 * kappa - 0.1, 2.0 * kappa + 0.1, -3.0 * kappa, 3.0 * kappa, 0.2};
  const auto roots = find_eigenvalues(sym(0.0, kappa, 0.0), w);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0].u == doctest::Approx(kappa).epsilon(1e-14));
  CHECK(roots[1].u == doctest::Approx(-kappa).epsilon(1e-14));
  const auto osc = find_eigenvalues(sym(2.0 * kappa, kappa, 0.0), w);
  REQUIRE(osc.size() == 2);
  CHECK(osc[0].u == 0.0);
  CHECK(std::abs(osc[0].v) == doctest::Approx(std::sqrt(3.0) * kappa).epsilon(1e-14));
}

TEST_CASE("root set matches the contour-grid oracle at kappa tau = 1.5") {
  const double kappa = 1.0, tau = 1.5;
  const auto p = sym(kappa, kappa, tau);
  SearchWindow w{-2.0, 1.0, -8.0, 8.0, kPi / (8.0 * tau)};
  const auto roots = find_eigenvalues(p, w);
  const auto oracle = grid_scan_oracle(p, w, 2000);
  CHECK(roots.size() == oracle.size());
  for (const auto& r : roots) {
    double nearest = 1e300;
    for (const auto& o : oracle) nearest = std::min(nearest, std::abs(o - Complex(r.u, r.v)));
    CHECK(nearest < 0.02);  // oracle resolution is the cell diagonal
    CHECK(r.residual <= 1e-9 * kappa * kappa);
  }
}

TEST_CASE("count equals winding number across parameters") {
  for (double ktau : {0.5, 1.5, 3.0}) {
    for (double dwk : {0.0, 1.0, 3.0}) {
      const double tau = 1.0, kappa = ktau;
      const auto p = sym(dwk * kappa, kappa, tau);
      const auto w = default_window(p);
      const auto roots = find_eigenvalues(p, w);
      CHECK(static_cast<int>(roots.size()) == winding_number(p, w));
    }
  }
}

TEST_CASE("spectrum is closed under conjugation (symmetric variant)") {
  const auto p = sym(1.3, 1.1, 1.7);
  const auto roots = find_eigenvalues(p, default_window(p));
  for (const auto& r : roots) {
    bool found = false;
    for (const auto& s : roots)
      found = found || (std::abs(s.u - r.u) < 1e-8 && std::abs(s.v + r.v) < 1e-8);
    CHECK(found);
  }
}

TEST_CASE("dominant rate") {
  SUBCASE("Markovian") {
    CHECK(dominant_rate(sym(0.0, 2.3, 0.0)) == doctest::Approx(2.3).epsilon(1e-14));
  }
  SUBCASE("closed form W0(kappa tau)/tau at zero detuning") {
    const double kappa = 1.5, tau = 1.0;
    const double expect = lambert_w(WBranch::principal, kappa * tau) / tau;
    CHECK(dominant_rate(sym(0.0, kappa, tau)) == doctest::Approx(expect).epsilon(1e-12));
  }
  SUBCASE("detuning symmetry") {
    const auto up = dominant_rate(sym(2.4, 1.0, 2.0));
    const auto um = dominant_rate(sym(-2.4, 1.0, 2.0));
    CHECK(up == doctest::Approx(um).epsilon(1e-10));
  }
  SUBCASE("downward zero crossings at the predicted detunings, kappa tau = 2") {
    const double kappa = 1.0, tau = 2.0;
    const double eps = 5e-3;
    for (const auto& [n, dw] : transition_detunings(kappa, tau, 8)) {
      CHECK(dominant_rate(sym(dw - eps, kappa, tau)) > 0.0);
      CHECK(dominant_rate(sym(dw + eps, kappa, tau)) < 0.0);
    }
  }
}

TEST_CASE("continuity to the Markovian limit as tau -> 0") {
  const double kappa = 1.0, dw = 0.5;
  const double expect = std::sqrt(kappa * kappa - dw * dw);
  for (double tau : {1e-2, 1e-3}) {
    SearchWindow w{-3.0, 2.0, -2.0, 2.0, 0.1};
    const auto roots = find_eigenvalues(sym(dw, kappa, tau), w);
    REQUIRE(roots.size() == 2);
    CHECK(std::abs(roots[0].u - expect) < 5.0 * tau);
    CHECK(std::abs(roots[1].u + expect) < 5.0 * tau);
  }
}

TEST_CASE("central dome rate") {
  const double kappa = 1.0, tau = 1.0;
  CHECK(*central_dome_rate(kappa, tau, 0.0) ==
        doctest::Approx(lambert_w(WBranch::principal, kappa * tau)).epsilon(1e-13));
  CHECK(!central_dome_rate(kappa, tau, 5.0 * kappa).has_value());
  // 1D bisection oracle for the stated scalar equation at dw = kappa/2
  const double dw = 0.5;
  auto g = [&](double z) {
    const double arg = 1.0 - std::pow(dw * std::exp(z) / kappa, 2);
    return z * std::exp(z) - kappa * tau * std::sqrt(std::max(0.0, arg));
  };
  double lo = 0.0, hi = lambert_w(WBranch::principal, kappa * tau);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) <= 0.0 ? lo : hi) = mid;
  }
  CHECK(*central_dome_rate(kappa, tau, dw) == doctest::Approx(0.5 * (lo + hi) / tau).epsilon(1e-10));
  // the dome value also matches the dominant rate of the full root search
  CHECK(dominant_rate(sym(dw, kappa, tau)) ==
        doctest::Approx(*central_dome_rate(kappa, tau, dw)).epsilon(1e-9));
}

TEST_CASE("transition detunings") {
  const double tau = 1.0;
  auto t0 = transition_detunings(0.0, tau, 2);
  REQUIRE(t0.size() == 1);
  CHECK(t0[0].first == 2);
  CHECK(t0[0].second == doctest::Approx(kPi / tau).epsilon(1e-15));
  const double kappa = 2.0;
  auto t1 = transition_detunings(kappa, tau, 2);
  CHECK(t1[0].second == doctest::Approx(std::sqrt(kPi * kPi + 4.0)).epsilon(1e-15));
  auto many = transition_detunings(1.0, tau, 40);
  for (std::size_t i = 1; i < many.size(); ++i) {
    CHECK(many[i].second > many[i - 1].second);
    CHECK(many[i].first == many[i - 1].first + 2);
  }
  // consecutive differences approach pi/tau from below
  const double d_last = many.back().second - many[many.size() - 2].second;
  CHECK(d_last < kPi / tau);
  CHECK(d_last > kPi / tau - 0.01);
}

TEST_CASE("predicted SOW") {
  const double tau = 1.0;
  CHECK(sow_predicted(0.0, tau, 2, SweepVariant::SymmetricLTau) ==
        doctest::Approx(kPi / tau).epsilon(1e-15));
  CHECK(sow_predicted(0.0, tau, 2, SweepVariant::FixedSecondLaser) ==
        doctest::Approx(kPi / (2.0 * tau)).epsilon(1e-15));
  const double kappa = 2.0;
  CHECK(sow_predicted(kappa, tau, 10, SweepVariant::SymmetricLTau) ==
        doctest::Approx(kPi / tau - 4.0 / (120.0 * kPi) / tau).epsilon(1e-14));
  CHECK(sow_predicted(1.0, tau, 10000, SweepVariant::SymmetricLTau) ==
        doctest::Approx(kPi / tau).epsilon(1e-8));
}

TEST_CASE("fixed-second-laser variant is not conjugate-symmetric") {
  SpectralParams p{2.7, 1.0, 1.5, SweepVariant::FixedSecondLaser, 0.0};
  const auto roots = find_eigenvalues(p, default_window(p));
  CHECK(!roots.empty());
  for (const auto& r : roots) CHECK(r.residual <= 1e-9 * p.kappa * p.kappa);
  bool symmetric = true;
  for (const auto& r : roots) {
    if (std::abs(r.v) < 1e-9) continue;
    bool found = false;
    for (const auto& s : roots)
      found = found || (std::abs(s.u - r.u) < 1e-7 && std::abs(s.v + r.v) < 1e-7);
    symmetric = symmetric && found;
  }
  CHECK(!symmetric);
}

TEST_CASE("seed spacing invariant is enforced") {
  const auto p = sym(0.0, 1.0, 2.0);
  SearchWindow w{-1.0, 1.0, -1.0, 1.0, kPi / (2.0 * p.tau)};
  CHECK_THROWS_AS(find_eigenvalues(p, w), DomainError);
}
