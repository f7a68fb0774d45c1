#pragma once

#include <stdexcept>
#include <string>

namespace sideband {

// Base class for every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

// An iterative solver failed to reach its tolerance.
struct NonConvergenceError : Error {
  using Error::Error;
};

// A root lies too close to the search-window boundary; enlarge the window.
struct WindowBoundaryError : Error {
  using Error::Error;
};

// Integration step size incompatible with the delay.
struct StepSizeError : Error {
  using Error::Error;
};

// State became NaN/Inf during integration; carries the first bad time.
struct NonFiniteStateError : Error {
  NonFiniteStateError(const std::string& msg, double t) : Error(msg), time(t) {}
  double time;
};

// The zero-delay seeding run did not settle.
struct SeedingDivergenceError : Error {
  using Error::Error;
};

// Detuning grid does not extend far enough past the central dome.
struct InsufficientRangeError : Error {
  using Error::Error;
};

// Fourier spectrum of the sideband data has no dominant peak.
struct NoPeakError : Error {
  using Error::Error;
};

// Bad key=value configuration input.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace sideband
