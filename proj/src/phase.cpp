#include "giant_atom/phase.hpp"

#include <cmath>

namespace giant_atom {

PhaseFactor phase_factor(double Delta, double x) {
  PhaseFactor ph;
  if (Delta == 1.0) {
    const double s = std::sin(0.5 * x);
    ph.e = -std::polar(1.0, x);
    ph.one_plus = -2.0 * s * kI * std::polar(1.0, 0.5 * x);
    ph.one_plus_cos = 2.0 * s * s;
    ph.sin = -std::sin(x);
    return ph;
  }
  const double phi = kPi * Delta + x;
  const double c = std::cos(0.5 * phi);
  ph.e = (Delta == 0.0) ? std::polar(1.0, x) : std::polar(1.0, phi);
  ph.one_plus = 2.0 * c * std::polar(1.0, 0.5 * phi);
  ph.one_plus_cos = 2.0 * c * c;
  ph.sin = (Delta == 0.0) ? std::sin(x) : std::sin(phi);
  return ph;
}

double residual_of(double phase) {
  const double x = phase / kPi;
  double d = x - 2.0 * std::floor(0.5 * x);
  const double r = std::round(d);
  if (std::abs(d - r) <= 1e-9 * std::max(1.0, std::abs(x))) d = r;
  if (d >= 2.0) d -= 2.0;
  return d;
}

}  // namespace giant_atom
