#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace giant_atom {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Branch k of the Lambert W function, w e^w = z.
/// Branch 0 is principal; Im W_k grows with k. Throws IterationFailure if
/// Halley iteration does not settle, DomainError for z = 0 on a branch k != 0.
cplx lambert_w(int branch, cplx z);

/// Samples of a complex trajectory y(t) on t = n * grid_step, n >= 0, with
/// y(t < 0) = 0. Off-grid queries use cubic Hermite interpolation with the
/// one-sided derivatives stored per interval, so kinks at multiples of the
/// delay are not smeared.
struct DelayHistory {
  double grid_step = 0.0;
  double delay = 0.0;
  std::vector<cplx> samples;
  /// Derivative at the left end (right limit) of interval [t_n, t_n+1].
  std::vector<cplx> slope_left;
  /// Derivative at the right end (left limit) of interval [t_n, t_n+1].
  std::vector<cplx> slope_right;

  std::size_t steps_per_delay() const;
  double horizon() const { return grid_step * static_cast<double>(samples.empty() ? 0 : samples.size() - 1); }
  /// y(t); zero for t < 0, RangeError past the horizon.
  cplx value_at(double t) const;
  /// Interpolated value inside interval n at fraction theta in [0,1].
  cplx interval_value(std::size_t n, double theta) const;
};

/// Right-hand side f(t, y(t), y(t-T), d(t), d(t-T)).
using DelayRhs = std::function<cplx(double, cplx, cplx, cplx, cplx)>;
/// Inhomogeneous drive d(t); only queried for t >= 0 (taken as zero before).
using DriveFunction = std::function<cplx(double)>;

/// Method-of-steps classical RK4 for y' = f(t, y, y(t-T), d(t), d(t-T)).
/// `step` must divide `delay` exactly (ConfigError otherwise). Half-step
/// history values come from the finished segment via Hermite interpolation.
DelayHistory integrate_delay_ode(const DelayRhs& rhs, double delay, double step, double horizon,
                                 cplx initial, const DriveFunction& drive = {});

/// Adaptive Gauss-Kronrod quadrature of f over [a, b], split at the given
/// interior breakpoints. Infinite limits are allowed. Stops when the error
/// estimate is below max(abs_tol, rel_tol * |result|); IntegrationError if
/// the piece budget runs out well short of that.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-10, double abs_tol = 0.0,
                          const std::vector<double>& breakpoints = {});

/// Composite Simpson rule on uniform samples (odd count), falling back to a
/// trapezoid on the last interval when the count is even.
double simpson(const std::vector<double>& y, double h);

}  // namespace giant_atom
