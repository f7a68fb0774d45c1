#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "sideband/errors.hpp"

namespace sideband::spectral {

using Complex = std::complex<double>;

// Which frequency sweep the Liouvillian describes. SymmetricLTau varies the
// two mode frequencies antisymmetrically with e^{i*omega0*tau} pinned to +-1;
// FixedSecondLaser holds the second frequency fixed and sweeps the first, so
// the coupling phase depends on the detuning.
enum class SweepVariant {
  SymmetricLTau,
  FixedSecondLaser,
};

// Parameters of one time-delayed two-mode Liouvillian instance.
// Rates in 1/ns, angular rates in rad/ns, time in ns.
struct SpectralParams {
  double delta_omega = 0.0;
  double kappa = 0.0;
  double tau = 0.0;
  SweepVariant variant = SweepVariant::SymmetricLTau;
  double omega_fixed = 0.0;  // omega_2, used by FixedSecondLaser only
};

// One characteristic root lambda = u + i v with its residual certificate.
struct Eigenvalue {
  double u = 0.0;         // 1/ns
  double v = 0.0;         // rad/ns
  double residual = 0.0;  // |characteristic residual at u+iv|
};

// Rectangle in the complex-lambda plane to search, plus the seed grid pitch.
// seed_spacing must be <= pi/(4 tau) for tau > 0 (half the branch spacing).
struct SearchWindow {
  double u_min, u_max;  // 1/ns
  double v_min, v_max;  // rad/ns
  double seed_spacing;
};

// Coupling phase squared that multiplies kappa^2 in the characteristic
// equation: 1 for the symmetric variant, e^{-2i(omega_fixed+delta_omega)tau}
// for the fixed-second-laser sweep (omega_1 - delta_omega = omega_0).
Complex phase_factor_sq(const SpectralParams& p);

// lambda^2 + delta_omega^2 - kappa^2 * phase^2 * e^{-2 lambda tau}
Complex char_residual(Complex lambda, const SpectralParams& p);

// Real part of char_residual at u+iv (symmetric variant only):
//   F(u,v) = u^2 - v^2 + dw^2 - k^2 e^{-2u tau} cos(2v tau)
double contour_F(double u, double v, const SpectralParams& p);

// Imaginary part (symmetric variant only):
//   G(u,v) = 2uv + k^2 e^{-2u tau} sin(2v tau)
double contour_G(double u, double v, const SpectralParams& p);

// Double zeros of G along the u-axis: u_{0,1} = W_{0,-1}(-2 k^2 tau^2)/(2 tau).
// Exist only for kappa*tau < 1/sqrt(2e) ~ 0.43; both negative, u1 < u0 < 0.
std::optional<std::pair<double, double>> g_double_zeros(double kappa, double tau);

// Eigenvalues of the zero-delay Liouvillian: +-sqrt(kappa^2 - delta_omega^2).
std::pair<Complex, Complex> markovian_eigenvalues(double kappa, double delta_omega);

// Winding number of the characteristic function around the window boundary
// (argument principle, trapezoidal argument tracking, 256 base points per
// side with local refinement). Equals the number of roots inside.
int winding_number(const SpectralParams& p, const SearchWindow& w);

// All characteristic roots inside the window, deduplicated, each certified
// with |residual| <= 1e-9 kappa^2. Count is validated against the argument
// principle. Throws WindowBoundaryError when a root sits on the boundary and
// NonConvergenceError when the count cannot be reconciled.
std::vector<Eigenvalue> find_eigenvalues(const SpectralParams& p, const SearchWindow& w);

// Window guaranteed to contain every root with u >= 0:
// u in [-3k - 2/tau, +2k], v in +-(delta_omega + 4 pi/tau).
SearchWindow default_window(const SpectralParams& p);

// U = max Re lambda over the characteristic roots in the window.
double dominant_rate(const SpectralParams& p, const SearchWindow& w);
double dominant_rate(const SpectralParams& p);  // default window

// Positive u-axis crossing of the F=0 contour: u = z'/tau with
// z' e^{z'} = kappa tau sqrt(1 - (delta_omega e^{z'}/kappa)^2).
// Empty once the detuning exceeds the dome edge (delta_omega >= kappa).
// Reduces to W_0(kappa tau)/tau at delta_omega = 0.
std::optional<double> central_dome_rate(double kappa, double tau, double delta_omega);

// Detuning in [dw_lo, dw_hi] at which dominant_rate changes sign, located by
// bisection to tol_dw. Requires opposite signs at the endpoints.
double find_rate_crossing(SpectralParams p, double dw_lo, double dw_hi, double tol_dw);

// Detunings of the U>0 <-> U<0 transitions: dw_n = sqrt((n pi/2 tau)^2 + k^2)
// for even n in [2, n_max], strictly increasing.
std::vector<std::pair<int, double>> transition_detunings(double kappa, double tau, int n_max);

// Predicted sideband oscillation width pi/tau - kappa^2 tau/(pi n (n+2)),
// halved for the FixedSecondLaser sweep.
double sow_predicted(double kappa, double tau, int n, SweepVariant variant);

}  // namespace sideband::spectral
