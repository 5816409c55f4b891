#include "giant_atom/single_excitation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "giant_atom/errors.hpp"
#include "giant_atom/phase.hpp"

namespace giant_atom {

namespace {

cplx denominator(const SystemParams& p, double nu) {
  const PhaseFactor ph = phase_factor(p.residual_phase(), nu * p.delay_T);
  return nu + kI * p.gamma * ph.one_plus;
}

double coupling_V(const SystemParams& p) { return std::sqrt(0.5 * p.gamma); }

}  // namespace

SystemParams SystemParams::from_dimensionless(double gammaT, double omega0T, double T) {
  SystemParams p;
  p.delay_T = T;
  p.gamma = gammaT / T;
  p.omega0 = omega0T / T;
  p.validate();
  return p;
}

double SystemParams::residual_phase() const { return residual_of(omega0T()); }

cplx SystemParams::feedback_phase() const {
  const double d = residual_phase();
  if (d == 0.0) return 1.0;
  if (d == 1.0) return -1.0;
  if (d == 0.5) return kI;
  if (d == 1.5) return -kI;
  return std::polar(1.0, kPi * d);
}

bool SystemParams::is_dark() const { return residual_phase() == 1.0; }

std::vector<std::string> SystemParams::warnings() const {
  std::vector<std::string> w;
  if (gamma > omega0 / 10.0) w.push_back("RWA guard: gamma exceeds omega0/10");
  return w;
}

void SystemParams::validate() const {
  if (!std::isfinite(gamma) || !std::isfinite(omega0) || !std::isfinite(delay_T)) {
    throw ConfigError("SystemParams: non-finite field");
  }
  if (!(gamma > 0.0)) throw ConfigError("SystemParams: gamma must be positive");
  if (!(delay_T > 0.0)) throw ConfigError("SystemParams: delay_T must be positive");
}

SystemParams region_b() { return SystemParams::from_dimensionless(0.045, 2.4 * kPi); }
SystemParams region_c() { return SystemParams::from_dimensionless(1.0, 20.0 * kPi); }
SystemParams region_d() { return SystemParams::from_dimensionless(37.5, 2000.0 * kPi); }

cplx AmplitudeTrace::lab(double t) const { return std::polar(1.0, -params.omega0 * t) * at(t); }

cplx AmplitudeTrace::leg_sum(double t) const {
  return at(t) + params.feedback_phase() * at(t - params.delay_T);
}

double effective_gamma(double gamma0, int N, double phase) {
  if (N <= 0) throw DomainError("effective_gamma: N must be >= 1");
  // (1 - cos N phi)/(1 - cos phi) = [sin(N x)/sin x]^2, x = phi/2 reduced mod pi
  const double x = std::remainder(0.5 * phase, kPi);
  if (x == 0.0) return gamma0 * N * N;
  const double r = std::sin(N * x) / std::sin(x);
  return gamma0 * r * r;
}

cplx spontaneous_series_rotating(const SystemParams& p, double t, cplx e0) {
  if (!(t >= 0.0)) throw DomainError("spontaneous_series: t must be >= 0");
  const double T = p.delay_T;
  const double Delta = p.residual_phase();
  const auto nmax = static_cast<long>(std::floor(t / T));
  cplx sum = 0.0;
  for (long n = 0; n <= nmax; ++n) {
    const double u = t - static_cast<double>(n) * T;
    if (n > 0 && u <= 0.0) continue;
    const double gu = p.gamma * u;
    // |term| is a Poisson weight, so it never overflows in this form
    const double logmag = (n == 0) ? -gu : static_cast<double>(n) * std::log(gu) - std::lgamma(n + 1.0) - gu;
    const double turns = std::fmod(static_cast<double>(n) * (1.0 + Delta), 2.0);
    sum += std::polar(std::exp(logmag), kPi * turns);
  }
  return e0 * sum;
}

cplx spontaneous_series(const SystemParams& p, double t, cplx e0) {
  return std::polar(1.0, -p.omega0 * t) * spontaneous_series_rotating(p, t, e0);
}

std::pair<int, int> default_mode_range(const SystemParams& p) {
  const int K = static_cast<int>(std::ceil(5.0 * p.gammaT() / kPi)) + 5;
  return {-K, K};
}

std::vector<ComplexMode> mode_frequencies(const SystemParams& p, int k_min, int k_max) {
  if (k_min > k_max) throw ConfigError("mode_frequencies: k_min > k_max");
  p.validate();
  const double gT = p.gammaT();
  const double T = p.delay_T;
  const cplx c = p.feedback_phase();
  const cplx z = -gT * std::exp(gT) * c;
  std::vector<ComplexMode> out;
  out.reserve(static_cast<std::size_t>(k_max - k_min + 1));
  for (int k = k_min; k <= k_max; ++k) {
    const cplx W = lambert_w(k, z);
    cplx nu = -kI * p.gamma + kI * W / T;
    auto f = [&](cplx v) { return v + kI * p.gamma + kI * p.gamma * c * std::exp(kI * v * T); };
    double res = 0.0;
    for (int it = 0; it < 4; ++it) {
      const cplx fe = f(nu);
      const double scale = std::max({std::abs(nu), p.gamma, 1.0 / T});
      res = std::abs(fe) / scale;
      if (res <= 1e-14) break;
      const cplx fp = 1.0 - gT * c * std::exp(kI * nu * T);
      nu -= fe / fp;
    }
    res = std::abs(f(nu)) / std::max({std::abs(nu), p.gamma, 1.0 / T});
    if (res > 1e-12) throw IterationFailure("mode_frequencies: pole residual too large", nu);
    if (nu.imag() > 0.0 && nu.imag() < 1e-13 * std::max(p.gamma, 1.0 / T)) nu.imag(0.0);
    ComplexMode m;
    m.k = k;
    m.offset = nu;
    m.omega = p.omega0 + nu;
    m.residue_weight = 1.0 / (1.0 + gT - kI * nu * T);
    out.push_back(m);
  }
  return out;
}

ModeSum mode_sum_rotating(const std::vector<ComplexMode>& modes, double t, cplx e0) {
  if (modes.empty()) throw ConfigError("mode_sum: empty mode list");
  if (!(t > 0.0)) throw DomainError("mode_sum: t must be > 0");
  cplx s = 0.0;
  for (const auto& m : modes) s += m.residue_weight * std::exp(-kI * m.offset * t);
  return {e0 * s, modes.size()};
}

ModeSum mode_sum_amplitude(const std::vector<ComplexMode>& modes, const SystemParams& p, double t, cplx e0) {
  ModeSum r = mode_sum_rotating(modes, t, e0);
  r.value *= std::polar(1.0, -p.omega0 * t);
  return r;
}

SpectrumValue atom_power_spectrum(const SystemParams& p, double omega) {
  const double nu = omega - p.omega0;
  const cplx D = denominator(p, nu);
  SpectrumValue s;
  s.residue = 1.0 / (1.0 + p.gammaT());
  if (std::norm(D) == 0.0) {
    s.dark_singularity = true;
    return s;
  }
  s.value = p.omega0 / std::norm(D);
  return s;
}

SpectrumValue output_power_spectrum(const SystemParams& p, double omega) {
  const double nu = omega - p.omega0;
  const PhaseFactor ph = phase_factor(p.residual_phase(), nu * p.delay_T);
  const cplx D = nu + kI * p.gamma * ph.one_plus;
  SpectrumValue s;
  s.residue = 1.0 / (1.0 + p.gammaT());
  if (std::norm(D) == 0.0) {
    // 0/0 at the dark point; the limit along omega is finite
    const double gT = p.gammaT();
    s.dark_singularity = true;
    s.value = p.gamma * p.delay_T * p.delay_T / (2.0 * (1.0 + gT) * (1.0 + gT));
    return s;
  }
  s.value = p.gamma * ph.one_plus_cos / std::norm(D);
  return s;
}

double default_step(const SystemParams& p) {
  double h = p.delay_T / 1024.0;
  while (h > 0.02 / p.gamma) h *= 0.5;
  return h;
}

AmplitudeTrace spontaneous_trace(const SystemParams& p, double horizon, cplx e0, double step) {
  p.validate();
  const double g = p.gamma;
  const cplx c = p.feedback_phase();
  auto rhs = [g, c](double, cplx y, cplx yd, cplx, cplx) { return -g * (y + c * yd); };
  AmplitudeTrace tr;
  tr.params = p;
  tr.history = integrate_delay_ode(rhs, p.delay_T, step > 0.0 ? step : default_step(p), horizon, e0);
  return tr;
}

AmplitudeTrace driven_amplitude(const SystemParams& p, cplx A, double omega_d, double horizon, double step) {
  p.validate();
  if (!(horizon > 0.0)) throw ConfigError("driven_amplitude: horizon must be positive");
  const double g = p.gamma;
  const double V = coupling_V(p);
  const cplx c = p.feedback_phase();
  const double delta = omega_d - p.omega0;
  auto rhs = [g, V, c](double, cplx y, cplx yd, cplx d, cplx dd) {
    return -g * (y + c * yd) - kI * V * (d + c * dd);
  };
  auto drive = [A, delta](double s) { return A * std::polar(1.0, -delta * s); };
  AmplitudeTrace tr;
  tr.params = p;
  tr.drive_amplitude = A;
  tr.omega_d = omega_d;
  tr.history = integrate_delay_ode(rhs, p.delay_T, step > 0.0 ? step : default_step(p), horizon, 0.0, drive);
  return tr;
}

cplx output_field(const AmplitudeTrace& trace, double t) {
  const double V = coupling_V(trace.params);
  return -kI * V * std::polar(1.0, -trace.params.omega0 * t) * trace.leg_sum(t);
}

cplx transmitted_field(const AmplitudeTrace& trace, double t) {
  cplx in = 0.0;
  const double s = t - trace.params.delay_T;
  if (s >= 0.0) in = trace.drive_amplitude * std::polar(1.0, -trace.omega_d * s);
  return in + output_field(trace, t);
}

EnergyLedger stored_energies(const AmplitudeTrace& trace, std::size_t stride, bool exact_overlap) {
  const SystemParams& p = trace.params;
  const DelayHistory& h = trace.history;
  const double T = p.delay_T;
  if (trace.horizon() < T * (1.0 - 1e-12)) throw RangeError("stored_energies: trace shorter than T");
  if (stride == 0) stride = 1;
  const std::size_t N = h.steps_per_delay();
  const std::size_t M = h.samples.size() - 1;
  const double dt = h.grid_step;
  const cplx c = p.feedback_phase();

  // cumulative int_0^{t_n} |e|^2 with Simpson per interval on the Hermite midpoint
  std::vector<double> Q(M + 1, 0.0);
  std::vector<double> flux(M, 0.0);  // int over interval n of |e + e_d|^2
  for (std::size_t n = 0; n < M; ++n) {
    const cplx y0 = h.samples[n], y1 = h.samples[n + 1], ym = h.interval_value(n, 0.5);
    Q[n + 1] = Q[n] + dt / 6.0 * (std::norm(y0) + 4.0 * std::norm(ym) + std::norm(y1));
    cplx d0 = 0.0, dm = 0.0, d1 = 0.0;
    if (n >= N) {
      d0 = h.samples[n - N];
      dm = h.interval_value(n - N, 0.5);
      d1 = h.samples[n - N + 1];
    }
    flux[n] = dt / 6.0 * (std::norm(y0 + c * d0) + 4.0 * std::norm(ym + c * dm) + std::norm(y1 + c * d1));
  }

  EnergyLedger L;
  for (std::size_t n = 0; n <= M; n += stride) {
    const double t = dt * static_cast<double>(n);
    double ep = p.gamma * (Q[n] - (n >= N ? Q[n - N] : 0.0));
    if (exact_overlap) {
      // gamma Re int_0^T e(t-tau) e*(t-T+tau) dtau with lab phases e^{i omega0 (2 tau - T)}
      auto re_part = [&](double tau) {
        const double a = t - tau, b = t - T + tau;
        if (a < 0.0 || b < 0.0) return 0.0;
        const cplx ph = std::conj(c) * std::polar(1.0, std::fmod(2.0 * p.omega0 * tau, 2.0 * kPi));
        return (ph * h.value_at(a) * std::conj(h.value_at(b))).real();
      };
      // the interpolant is only C1 at grid nodes; t is on the grid so both arguments hit them at tau = j dt
      std::vector<double> cuts;
      for (std::size_t j = 1; j < N; ++j) cuts.push_back(dt * static_cast<double>(j));
      // |overlap| <= int_0^T |e(t-tau)|^2 by Cauchy-Schwarz, which sets the absolute scale
      const double bound = Q[n] - (n >= N ? Q[n - N] : 0.0);
      ep += p.gamma * integrate_adaptive(re_part, 0.0, T, 1e-8, 1e-10 * bound + 1e-300, cuts);
    }
    L.times.push_back(t);
    L.E_P.push_back(ep);
    L.E_T.push_back(ep + std::norm(h.samples[n]));
  }
  for (std::size_t m = 0; (m + 1) * N <= M; ++m) {
    double e = 0.0;
    for (std::size_t n = m * N; n < (m + 1) * N; ++n) e += flux[n];
    L.pulse_energies.push_back(0.5 * p.gamma * e);
  }
  return L;
}

std::pair<double, double> reflectance_at_detuning(const SystemParams& p, double delta) {
  const PhaseFactor ph = phase_factor(p.residual_phase(), delta * p.delay_T);
  const double num = p.gamma * p.gamma * ph.one_plus_cos * ph.one_plus_cos;
  const double a = delta - p.gamma * ph.sin;
  const double den = a * a + num;
  const double R = (den == 0.0) ? 0.0 : num / den;
  return {R, 1.0 - R};
}

std::pair<double, double> reflectance_transmittance(const SystemParams& p, double omega_d) {
  return reflectance_at_detuning(p, omega_d - p.omega0);
}

std::vector<double> total_reflection_frequencies(const SystemParams& p, FrequencyInterval bracket) {
  if (!std::isfinite(bracket.lo) || !std::isfinite(bracket.hi)) throw ConfigError("bracket must be finite");
  if (bracket.lo > bracket.hi) std::swap(bracket.lo, bracket.hi);
  const double T = p.delay_T;
  const double Delta = p.residual_phase();
  auto g = [&](double x) { return x - p.gamma * phase_factor(Delta, x * T).sin; };
  const double a = bracket.lo - p.omega0, b = bracket.hi - p.omega0;
  const double grid = 2.0 * kPi / (50.0 * T);
  const auto M = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) / grid)));
  const double tol = 1e-12 * std::max(std::abs(p.omega0), 1.0 / T);

  std::vector<double> roots;
  auto x_at = [&](std::size_t i) { return i == M ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(M); };
  double x0 = x_at(0), g0 = g(x0);
  if (g0 == 0.0) roots.push_back(x0);
  for (std::size_t i = 1; i <= M; ++i) {
    const double x1 = x_at(i), g1 = g(x1);
    if (g1 == 0.0) {
      roots.push_back(x1);
    } else if (g0 != 0.0 && std::signbit(g0) != std::signbit(g1)) {
      double lo = x0, hi = x1, glo = g0;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = g(mid);
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (std::signbit(gm) == std::signbit(glo)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    g0 = g1;
  }
  for (double& r : roots) r += p.omega0;
  return roots;
}

double dark_state_amplitude(const SystemParams& p) {
  if (!p.is_dark()) throw DomainError("dark_state_amplitude: omega0 T is not an odd multiple of pi");
  return 1.0 / (1.0 + p.gammaT());
}

}  // namespace giant_atom
