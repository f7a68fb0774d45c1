#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "sideband/dde.hpp"
#include "sideband/spectral.hpp"

namespace sideband::models {

using spectral::SweepVariant;
using Complex = std::complex<double>;

// Minimal two-mode model. State layout: [ReE1, ImE1, ReE2, ImE2].
struct MinimalParams {
  double delta_omega = 0.0;  // rad/ns
  double kappa = 0.0;        // 1/ns
  double tau = 0.0;          // ns
  SweepVariant variant = SweepVariant::SymmetricLTau;
  double omega_fixed = 0.0;  // omega_2 for the FixedSecondLaser sweep
  int phase_sign = +1;       // e^{i omega0 tau} = +-1 for the symmetric sweep

  spectral::SpectralParams spectral() const {
    return {delta_omega, kappa, tau, variant, omega_fixed};
  }
};

// Full Lang-Kobayashi parameter set for two delay-coupled lasers.
// State layout: [ReE1, ImE1, ReE2, ImE2, N1, N2].
struct LKParams {
  double alpha = 2.0;       // linewidth enhancement factor
  double gain = 100.0;      // G, 1/ns per unit excess carrier density
  double feedback = 0.0;    // K, dimensionless; coupling rate kappa = K/tau_in
  double tau_in = 1e-3;     // ns, internal round trip
  double tau_p = 0.01;      // ns, photon lifetime
  double tau_s = 1.0;       // ns, carrier lifetime
  double pump1 = 1.03;      // J1, carrier density / ns, above-threshold current
  double pump2 = 1.03;      // J2
  double n_th = 1.0;        // steady-state inversion

  double delta_omega = 0.0;
  double tau = 0.0;
  SweepVariant variant = SweepVariant::SymmetricLTau;
  double omega_fixed = 0.0;
  int phase_sign = +1;

  double kappa() const { return feedback / tau_in; }
  void set_kappa(double k) { feedback = k * tau_in; }
  // Solitary threshold current implied by the carrier equation: the N=0
  // fixed point has |E|^2 = tau_p (J - N_th/tau_s), so J_th = N_th/tau_s.
  double threshold_current() const { return n_th / tau_s; }
  double solitary_intensity(double pump) const {
    return tau_p * (pump - n_th / tau_s);
  }
};

// Delayed-coupling phase e^{-i omega0 tau}: the configured +-1 for the
// symmetric sweep, e^{-i(omega_fixed + delta_omega) tau} otherwise.
Complex coupling_phase(SweepVariant variant, int phase_sign, double omega_fixed,
                       double delta_omega, double tau);

// dE1 = i dw E1 + kappa phase E2(t-tau);  dE2 = -i dw E2 + kappa phase E1(t-tau)
struct MinimalRhs {
  double delta_omega;
  Complex coupling;  // kappa * phase
  void operator()(double t, const double* y, const double* yd, double* dydt) const;
};
MinimalRhs make_minimal_rhs(const MinimalParams& p);

// The four Lang-Kobayashi rate equations.
struct LKRhs {
  double delta_omega, alpha, gain, tau_p, tau_s, pump1, pump2, n_th;
  Complex coupling;  // (K/tau_in) * phase
  void operator()(double t, const double* y, const double* yd, double* dydt) const;
};
LKRhs make_lk_rhs(const LKParams& p);

// History segment sampled on the integration grid; usable as the history
// functor of dde::integrate (exact node lookup, clamped at the left edge).
struct SeededHistory {
  std::size_t dim = 0;
  double h = 0.0;
  long n_nodes = 0;                 // nodes at t = -(n_nodes-1) h ... 0
  std::vector<double> nodes;        // n_nodes * dim
  void operator()(double t, double* y) const;
  const double* back() const { return nodes.data() + (n_nodes - 1) * dim; }
};

// History for the minimal model: constant unit fields (the zero-delay linear
// system has no finite attractor to settle onto).
SeededHistory seed_history(const MinimalParams& p, double h);

// History for the LK model: integrates the zero-delay system from a randomly
// perturbed solitary fixed point until the intensity drift over 1 ns falls
// below 1e-6 relative, then returns the trailing segment of length tau.
// Throws SeedingDivergenceError if nothing settles within 200 ns.
SeededHistory seed_history(const LKParams& p, double h, std::uint64_t seed);

struct RunSettings {
  double h = 1e-3;          // ns, integration step
  double transient = 50.0;  // ns discarded before averaging
  double retain = 10.0;     // ns integrated beyond the transient
  double window = 1.0;      // ns averaging window
  std::uint64_t seed = 0;   // perturbation seed
};

struct SteadyState {
  double I1 = 0.0, I2 = 0.0;  // trailing-window mean of |E_k|^2
  double window = 0.0;        // ns
  bool converged = false;     // last two windows within 1% relative
};

// Integrates the LK system and averages the trailing 1 ns window. A failed
// convergence check doubles the transient once; chaotic regimes are reported
// with converged=false but still return the averaged value.
SteadyState steady_state_intensity(const LKParams& p, const RunSettings& run);

struct SweepProfile {
  double kappa = 0.0, tau = 0.0;
  SweepVariant variant = SweepVariant::SymmetricLTau;
  std::vector<double> detuning;
  std::vector<double> I1, I2;
  std::vector<double> I1_norm, I2_norm;  // filled by analysis::normalize_profile
  std::vector<std::uint8_t> converged;
  std::vector<std::uint8_t> failed;
  std::vector<std::string> error;  // per-point failure messages, empty on success
  double norm1 = 0.0, norm2 = 0.0;  // normalization constants once applied
  bool normalized = false;
};

// One steady-state evaluation per grid point with independent deterministic
// seeding, executed by `workers` threads. Per-point failures are recorded in
// the profile instead of aborting the sweep.
SweepProfile sweep_detuning(const LKParams& base, const std::vector<double>& detunings,
                            SweepVariant variant, const RunSettings& run, int workers);

}  // namespace sideband::models
