#pragma once

#include "sideband/models.hpp"

namespace sideband::analysis {

using models::SweepProfile;
using spectral::SweepVariant;

// Divides each intensity channel by the mean of its outermost 10% of grid
// points (largest |detuning|). Requires the grid to reach past the dome
// (max |detuning| > 2 kappa), else InsufficientRangeError.
SweepProfile normalize_profile(const SweepProfile& p);

// Smallest |detuning| beyond which the normalized profile stays within twice
// the tail oscillation amplitude; 0 for flat profiles. In the Markovian limit
// this recovers the APT transition at detuning ~ kappa.
double dome_edge(const SweepProfile& p);

struct SowEstimate {
  double value = 0.0;       // oscillation period in detuning (rad/ns)
  double fwhm_error = 0.0;  // FWHM of the Fourier peak, mapped to the period
  int n_sidebands_used = 0;
  double dome_edge = 0.0;
};

// Sideband oscillation width of a normalized profile: restrict to detunings
// beyond the dome edge, subtract the mean, Hann-window, Fourier transform
// over the detuning axis, and read the dominant peak with quadratic
// log-magnitude interpolation. Throws NoPeakError when the spectrum maximum
// is below 3x the median magnitude and InsufficientRangeError with fewer
// than 10 sidebands in range (warns below 20).
SowEstimate extract_sow(const SweepProfile& p);

struct SowReport {
  double measured = 0.0;
  double predicted = 0.0;  // large-n limit pi/tau (pi/2tau for FixedSecondLaser)
  double rel_dev = 0.0;
  bool within_error = false;
};

SowReport compare_sow(const SowEstimate& e, double kappa, double tau, SweepVariant variant);

}  // namespace sideband::analysis
