#pragma once

#include "giant_atom/numerics.hpp"

namespace giant_atom {

/// e^{i phi} and friends for phi = pi * Delta + x, exact when Delta is 0 or 1 and x = 0.
struct PhaseFactor {
  cplx e;               // e^{i phi}
  cplx one_plus;        // 1 + e^{i phi}
  double one_plus_cos;  // 1 + cos phi >= 0
  double sin;           // sin phi
  double cos() const { return one_plus_cos - 1.0; }
};

PhaseFactor phase_factor(double Delta, double x);

/// phase / pi reduced to [0, 2), snapped to an integer within 1e-9 * max(1, |phase/pi|).
double residual_of(double phase);

}  // namespace giant_atom
