#include "giant_atom/two_phonon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "giant_atom/errors.hpp"

namespace giant_atom {

namespace {

// (e^z - 1)/z
cplx E1(cplx z) {
  if (std::abs(z) < 0.5) {
    cplx term = 1.0, sum = 1.0;
    for (int k = 2; k < 40; ++k) {
      term *= z / double(k);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return (std::exp(z) - 1.0) / z;
}

// (e^z - 1 - z)/z^2
cplx E2(cplx z) {
  if (std::abs(z) < 2.0) {
    cplx term = 0.5, sum = 0.5;
    for (int k = 3; k < 60; ++k) {
      term *= z / double(k);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return (std::exp(z) - 1.0 - z) / (z * z);
}

cplx sinc(cplx z) {
  if (std::abs(z) < 1e-3) {
    const cplx z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

// Odd part over the dispersion denominator, [u(p) - u(-p)] / (2 D(p)).
// Near p = 0, D ~ p (1 - i lambda T), so the ratio tends to u'(0) / (1 - i lambda T).
template <class U>
cplx odd_ratio(const ScatteringKernel& k, U&& u, cplx u_prime0) {
  if (std::abs(k.p) * k.T < 1e-5) return u_prime0 / (1.0 - kI * k.lambda * k.T);
  return (u(k.p) - u(-k.p)) / (2.0 * k.D);
}

// h(x) = (x - lambda) e^{i x T} - i gamma e^{i phi}; C+ = h(p)/2D, C- = -h(-p)/2D.
cplx h_of(const ScatteringKernel& k, cplx x) {
  return (x - k.lambda) * std::exp(kI * x * k.T) - kI * k.gamma * k.phase.e;
}

cplx odd_M(const ScatteringKernel& k, double w) {
  // [M(w) - M(-w)] / 2w without cancellation
  return -k.M_at(w) * k.M_at(-w) * (1.0 - k.gamma * k.T * k.phase.e * sinc(cplx(w * k.T)));
}

// [M(w) - M(-w)]/2w + [M(w)F(w) + M(-w)F(-w)]/2
cplx pair_bracket(const ScatteringKernel& k, double w) {
  w = std::abs(w);  // even in w; keeps it exact under FMA contraction
  return odd_M(k, w) + 0.5 * (k.M_at(w) * vertex_F(k, w) + k.M_at(-w) * vertex_F(k, -w));
}

// cos((wT + phi)/2) cos((-wT + phi)/2) = (cos phi + cos wT)/2
double cos_product(const ScatteringKernel& k, double w) {
  const double s = std::sin(0.5 * w * k.T);
  return 0.5 * (k.phase.one_plus_cos - 2.0 * s * s);
}

void check_drive(const ScatteringKernel& k, double Omega) {
  if (!(Omega >= 0.0) || !std::isfinite(Omega)) throw ConfigError("Omega must be finite and >= 0");
  if (Omega >= 2.0 * k.gamma)
    throw DomainError("two-phonon expansion needs Omega/(2 gamma) < 1");
}

// sum_{m>n} (-i z)^m s^{m-n-1} / m!  times e^{i lambda z}
cplx tail_minus(const ScatteringKernel& k, int n, double z, cplx s) {
  const cplx w = -kI * z * s;
  if (std::abs(w) <= 30.0) {
    cplx term = 1.0;
    for (int m = 1; m <= n + 1; ++m) term *= -kI * z / double(m);
    cplx sum = term;
    for (int m = n + 2; m < n + 400; ++m) {
      term *= w / double(m);
      sum += term;
      if (m > std::abs(w) && std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::exp(kI * k.lambda * z) * sum;
  }
  // e^{i p z} - e^{i lambda z} sum_{m<=n} w^m/m!, divided by s^{n+1}
  cplx part = 1.0, term = 1.0;
  for (int m = 1; m <= n; ++m) {
    term *= w / double(m);
    part += term;
  }
  return (std::exp(kI * (k.lambda - s) * z) - std::exp(kI * k.lambda * z) * part) /
         std::pow(s, n + 1);
}

cplx I0_of(const ScatteringKernel& k, double tau) {
  const double a = std::abs(tau), T = k.T;
  const int N = static_cast<int>(std::floor(a / T));
  const cplx p = k.p, lam = k.lambda;
  const cplx ig = -kI * k.gamma * k.phase.e;  // -i gamma e^{i phi}
  const cplx Ap = p + lam + kI * k.gamma * k.phase.e * std::exp(kI * p * T);
  const cplx Am = -p + lam + kI * k.gamma * k.phase.e * std::exp(-kI * p * T);
  const cplx Q = ig / (p + lam);

  // the growing e^{-i p z} pieces of the explicit sum telescope into Q^{N+1}
  cplx acc = std::pow(Q, N + 1) * std::exp(-kI * p * (a - N * T)) * Ap -
             std::exp(kI * p * (a + T)) * Am;
  const cplx cm = std::exp(kI * p * T) * Am * Am;
  const cplx cp = std::exp(-kI * p * T) * Ap * Ap / (p + lam);
  cplx ign = 1.0, Qn = 1.0;
  for (int n = 0; n <= N; ++n) {
    const double z = a - n * T;
    acc += ign * cm * tail_minus(k, n, z, lam - p);
    const cplx wp = -kI * z * (p + lam);
    cplx f = 1.0, term = 1.0;
    for (int m = 1; m <= n; ++m) {
      term *= wp / double(m);
      f += term;
    }
    acc += Qn * cp * std::exp(kI * lam * z) * f;
    ign *= ig;
    Qn *= Q;
  }
  return acc / (2.0 * k.D);
}

// sum_n Theta(tau - nT) K_n(tau - nT), K_n(z) = (-1)^{n+1} e^{-gamma z} (gamma z)^n / n!
double kink_sum(double gamma, double T, double tau) {
  const double a = std::abs(tau);
  const int N = static_cast<int>(std::floor(a / T));
  double s = 0.0;
  for (int n = 0; n <= N; ++n) {
    // a - nT can round below zero at the last kink
    const double gz = gamma * std::max(0.0, a - n * T);
    double mag;
    if (n == 0) {
      mag = std::exp(-gz);
    } else if (gz == 0.0) {
      mag = 0.0;
    } else {
      mag = std::exp(-gz + n * std::log(gz) - std::lgamma(n + 1.0));
    }
    s += (n % 2 == 0 ? -mag : mag);
  }
  return s;
}

}  // namespace

DriveSettings DriveSettings::at_detuning(const SystemParams& p, double delta, double Omega,
                                         double pulse_length) {
  DriveSettings d;
  d.omega_d = p.omega0 + delta;
  d.delta = delta;
  d.phi = d.omega_d * p.delay_T;
  d.phase_residual = p.residual_phase();
  d.phase_offset = delta * p.delay_T;
  d.Omega = Omega;
  d.pulse_length = pulse_length;
  if (pulse_length > 0.0) d.nbar = Omega * Omega * pulse_length / (8.0 * p.gamma);
  return d;
}

DriveSettings DriveSettings::at_phase(const SystemParams& p, double delta, double phi,
                                      double Omega, double pulse_length) {
  DriveSettings d = at_detuning(p, delta, Omega, pulse_length);
  d.phi = phi;
  d.phase_residual = residual_of(phi);
  d.phase_offset = 0.0;
  return d;
}

std::vector<std::string> DriveSettings::warnings(const SystemParams& p) const {
  std::vector<std::string> w;
  if (nbar > 0.2) w.push_back("mean phonon number above 0.2; two-phonon truncation is rough");
  if (pulse_length > 0.0 && 2.0 * kPi / pulse_length > 0.1 * p.gamma)
    w.push_back("pulse bandwidth 2 pi/d is not small compared to gamma");
  if (Omega >= 2.0 * p.gamma) w.push_back("Omega/(2 gamma) >= 1: outside the weak-drive expansion");
  return w;
}

void DriveSettings::validate() const {
  if (!std::isfinite(Omega) || Omega < 0.0) throw ConfigError("drive: Omega must be finite and >= 0");
  if (!std::isfinite(delta) || !std::isfinite(phase_offset))
    throw ConfigError("drive: detuning and phase must be finite");
  if (!(phase_residual >= 0.0 && phase_residual < 2.0))
    throw ConfigError("drive: phase residual must lie in [0, 2)");
  if (!(pulse_length >= 0.0)) throw ConfigError("drive: pulse length must be >= 0");
}

cplx ScatteringKernel::M_at(double q) const {
  return 1.0 / (q + lambda + kI * gamma * phase.e * std::polar(1.0, q * T));
}

ScatteringKernel build_kernel(const SystemParams& params, const DriveSettings& drive) {
  params.validate();
  drive.validate();
  ScatteringKernel k;
  k.gamma = params.gamma;
  k.T = params.delay_T;
  k.delta = drive.delta;
  k.phase = phase_factor(drive.phase_residual, drive.phase_offset);
  k.pulse_length = drive.pulse_length;

  const double g = k.gamma;
  const cplx ige = kI * g * k.phase.e;
  k.lambda = cplx(k.delta, g);
  k.d = k.delta + kI * g * k.phase.one_plus;
  // p^2 = (lambda + i g e^{i phi})(lambda - i g e^{i phi}); the factored form keeps p small near p = 0
  cplx p = std::sqrt(k.d * (k.lambda - ige));
  if (p.imag() < 0.0 || (p.imag() == 0.0 && p.real() < 0.0)) p = -p;
  k.p = p;
  k.D = p * std::cos(p * k.T) - kI * k.lambda * std::sin(p * k.T);

  if (k.D == 0.0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    k.C_plus = k.C_minus = cplx(nan, nan);
  } else {
    k.C_plus = h_of(k, p) / (2.0 * k.D);
    k.C_minus = -h_of(k, -p) / (2.0 * k.D);
  }

  if (k.d == 0.0) {
    // delta = 0 exactly on a dark phase: the limit along delta
    k.s11 = 1.0;
    k.s21 = 0.0;
  } else {
    k.s11 = (k.delta - g * k.phase.sin) / k.d;
    k.s21 = -kI * g * k.phase.one_plus_cos / k.d;
  }

  const double T = k.T;
  auto w = [&](cplx x) { return h_of(k, x) * E1(-kI * x * T); };
  const cplx w0 = (1.0 - kI * k.lambda * T) + 0.5 * kI * T * k.d;
  k.Lambda = 1.0 + ige * kI * T * odd_ratio(k, w, w0);
  return k;
}

cplx vertex_F(const ScatteringKernel& k, double q) {
  if (k.d == 0.0) throw DomainError("vertex_F: undefined at the dark resonance (lambda + i gamma e^{i phi} = 0)");
  const double T = k.T;
  const cplx iT = kI * T;
  auto g = [&](cplx x) { return std::exp(-kI * x * T) * iT * E1(kI * (q + x) * T); };
  auto u = [&](cplx x) { return h_of(k, x) * g(x); };
  const cplx g0 = iT * E1(cplx(0.0, q * T));
  const cplx g0p = T * T * E2(cplx(0.0, q * T));
  const cplx u0p = (1.0 - kI * k.lambda * T) * g0 - k.d * g0p;
  const cplx sum = odd_ratio(k, u, u0p) - iT * E1(cplx(0.0, q * T));
  return -kI * k.gamma * k.phase.e / k.d * sum;
}

cplx transmittance_correction(const ScatteringKernel& k, double Omega) {
  check_drive(k, Omega);
  if (k.phase.one_plus_cos == 0.0 || k.d == 0.0) return 0.0;
  const double g = k.gamma, T = k.T;
  const cplx p = k.p;
  const double c2 = 0.5 * k.phase.one_plus_cos;  // cos^2(phi/2)
  const double r = Omega / (2.0 * g);
  const cplx num = k.lambda * std::cos(p * T) - kI * p * std::sin(p * T) + kI * g * k.phase.e;
  const cplx p_over_D = 1.0 / (std::cos(p * T) - kI * k.lambda * T * sinc(p * T));
  return 0.5 * r * r * 8.0 * kI * g * g * g * c2 * c2 * num * p_over_D /
         (std::norm(k.d) * k.d * k.d);
}

double inelastic_spectrum(const ScatteringKernel& k, double Omega, double omega) {
  check_drive(k, Omega);
  const double R = k.reflectance();
  if (R == 0.0) return 0.0;
  const double c = cos_product(k, omega);
  const double O2 = Omega * Omega;
  return O2 * O2 / (4.0 * kPi) * R * c * c * std::norm(pair_bracket(k, omega));
}

double inelastic_curvature(const ScatteringKernel& k, double Omega) {
  const double h = 1e-3 * std::min(k.gamma, 1.0 / k.T);
  const double s0 = inelastic_spectrum(k, Omega, 0.0);
  // S is even in omega: S(h) = S(0) + S'' h^2/2 + O(h^4)
  auto d2 = [&](double x) { return 2.0 * (inelastic_spectrum(k, Omega, x) - s0) / (x * x); };
  return (4.0 * d2(0.5 * h) - d2(h)) / 3.0;
}

double total_inelastic_power(const ScatteringKernel& k, double Omega) {
  check_drive(k, Omega);
  if (k.reflectance() == 0.0) return 0.0;
  const double r = Omega / (2.0 * k.gamma);
  if (k.resonant_bright()) return r * r * r * r * k.gamma / (4.0 * (1.0 + k.gamma * k.T));

  auto S = [&](double w) { return inelastic_spectrum(k, Omega, w); };
  const double L = 40.0 * std::max(k.gamma, std::abs(k.delta));
  const double step = kPi / k.T;  // S has its structure between multiples of pi/T
  auto period_cuts = [&](double a, double b) {
    std::vector<double> c;
    if ((b - a) / step <= 20000.0)
      for (double x = std::ceil(a / step) * step; x < b; x += step)
        if (x > a) c.push_back(x);
    return c;
  };
  std::vector<double> cuts = period_cuts(0.0, L);
  for (double f : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0})
    if (f * k.gamma < L) cuts.push_back(f * k.gamma);
  if (std::abs(k.delta) > 0.0 && std::abs(k.delta) < L) cuts.push_back(std::abs(k.delta));
  std::sort(cuts.begin(), cuts.end());

  double peak = S(0.0);
  for (double x : cuts) peak = std::max(peak, S(x));
  // absolute tolerance: 1e-10 of the peak height over a band of width gamma
  const double abs_tol = 1e-10 * peak * k.gamma;
  const double inner = integrate_adaptive(S, 0.0, L, 1e-9, abs_tol, cuts);
  // tail: S ~ omega^-4 times a periodic factor; quadrature to 8L, then the envelope
  const double X = 8.0 * L;
  double tail = integrate_adaptive(S, L, X, 1e-8, abs_tol, period_cuts(L, X));
  double mean = 0.0;
  for (int j = 0; j < 64; ++j) mean += S(X + (j + 0.5) * 2.0 * step / 64.0);
  tail += (mean / 64.0) * X / 3.0;
  return 2.0 * (inner + tail);
}

double PowerBalance::relative_error() const {
  const double scale = std::max(std::abs(elastic), std::abs(inelastic));
  return scale == 0.0 ? 0.0 : std::abs(elastic + inelastic) / scale;
}

PowerBalance power_balance(const ScatteringKernel& k, double Omega) {
  check_drive(k, Omega);
  PowerBalance b;
  const double R = k.reflectance();
  if (R == 0.0) return b;
  const cplx LM = k.Lambda / k.d;  // Lambda M(0)
  const double im = (std::conj(k.s11) * LM).imag() + (std::conj(k.s21) * LM).imag();
  const double O2 = Omega * Omega;
  b.elastic = -O2 * O2 * R * im / (16.0 * k.gamma * k.gamma);
  b.inelastic = 2.0 * total_inelastic_power(k, Omega);
  return b;
}

cplx pair_amplitude(const ScatteringKernel& k, double omega) {
  if (!(k.pulse_length > 0.0) || !std::isfinite(k.pulse_length))
    throw ConfigError("pair_amplitude: needs a positive finite pulse length d");
  if (k.reflectance() == 0.0) return 0.0;
  return k.s21 * (2.0 * k.gamma / k.pulse_length) * cos_product(k, omega) * pair_bracket(k, omega);
}

std::pair<cplx, cplx> correlation_I(const ScatteringKernel& k, double tau, double eps_p) {
  if (k.p_degenerate(eps_p))
    throw DomainError("correlation_I: |p| T <= eps_p; use g22_resonant_kinks for p -> 0");
  const cplx i0 = I0_of(k, tau);
  const cplx i1 = 0.5 * (I0_of(k, tau - k.T) + I0_of(k, tau + k.T));
  return {i0, i1};
}

CorrelationRow g2_functions(const ScatteringKernel& k, double tau) {
  CorrelationRow row;
  row.tau = tau;
  // G_{a'a} = |s_a' s_a + c X|^2, c = gamma^2 (1 + cos phi)/d^2, X = cos phi I0 + I1
  cplx cX = 0.0;
  if (k.phase.one_plus_cos != 0.0 && k.d != 0.0) {
    const cplx c = k.gamma * k.gamma * k.phase.one_plus_cos / (k.d * k.d);
    cplx X;
    if (k.p_degenerate()) {
      if (k.phase.one_plus_cos < 1.0)
        throw DomainError("g2_functions: p -> 0 near a dark phase has no finite pair term");
      X = -2.0 * kink_sum(k.gamma, k.T, tau) / (1.0 + k.gamma * k.T);
    } else {
      const auto [i0, i1] = correlation_I(k, tau);
      X = k.phase.cos() * i0 + i1;
    }
    cX = c * X;
  }
  row.G11 = std::norm(k.s11 * k.s11 + cX);
  row.G12 = std::norm(k.s11 * k.s21 + cX);
  row.G22 = std::norm(k.s21 * k.s21 + cX);
  const double t = std::norm(k.s11), r = std::norm(k.s21);
  if (t > 0.0) row.g11 = row.G11 / (t * t);
  if (r > 0.0) row.g22 = row.G22 / (r * r);
  if (t > 0.0 && r > 0.0) row.g12 = row.G12 / (t * r);
  return row;
}

CorrelationResult correlation_table(const ScatteringKernel& k, const std::vector<double>& taus) {
  CorrelationResult out;
  out.rows.reserve(taus.size());
  for (double t : taus) out.rows.push_back(g2_functions(k, t));
  return out;
}

double g22_resonant_kinks(const ScatteringKernel& k, double tau) {
  if (!k.p_degenerate() || k.phase.one_plus_cos < 1.0)
    throw DomainError("g22_resonant_kinks: needs delta = 0 and phi = 2k pi (p = 0)");
  const double v = 1.0 + kink_sum(k.gamma, k.T, tau) / (1.0 + k.gamma * k.T);
  return v * v;
}

}  // namespace giant_atom
