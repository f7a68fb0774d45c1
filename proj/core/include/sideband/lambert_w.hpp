#pragma once

#include "sideband/errors.hpp"

namespace sideband {

// Real branches of the Lambert W function. Only W_0 and W_{-1} have real
// values, so only those two are representable.
enum class WBranch : int {
  principal = 0,
  lower = -1,
};

// Solves w*exp(w) = x on the requested real branch.
//
// Domain: branch 0 needs x >= -1/e, branch -1 needs -1/e <= x < 0.
// Halley iteration from a branch-appropriate starting guess; converges to a
// relative residual below 1e-13 everywhere in the domain.
double lambert_w(WBranch branch, double x);

}  // namespace sideband
