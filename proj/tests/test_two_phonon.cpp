#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <algorithm>
#include <functional>
#include <random>

#include "giant_atom/errors.hpp"
#include "giant_atom/two_phonon.hpp"

using namespace giant_atom;

namespace {

ScatteringKernel kernel(double gT, double delta, double phi, double T = 1.0) {
  const SystemParams P = SystemParams::from_dimensionless(gT, 20.0 * kPi, T);
  return build_kernel(P, DriveSettings::at_phase(P, delta, phi, 0.0));
}

cplx cquad(const std::function<cplx(double)>& f, double a, double b, const std::vector<double>& cuts) {
  const double re = integrate_adaptive([&](double x) { return f(x).real(); }, a, b, 1e-11, 1e-13, cuts);
  const double im = integrate_adaptive([&](double x) { return f(x).imag(); }, a, b, 1e-11, 1e-13, cuts);
  return {re, im};
}

std::vector<double> grid_cuts(double step, double X) {
  std::vector<double> c;
  for (double x = step; x < X; x += step) c.push_back(x);
  return c;
}

// I0 written term by term, without the resummation used in the library. Its terms grow like
// e^{Im p |tau|} and cancel, so *scale returns the largest one for the tolerance.
cplx I0_naive(const ScatteringKernel& k, double tau, double* scale = nullptr) {
  const double a = std::abs(tau), T = k.T;
  const cplx p = k.p, lam = k.lambda, ig = -kI * k.gamma * k.phase.e;
  auto Minv = [&](cplx x) { return x + lam + kI * k.gamma * k.phase.e * std::exp(kI * x * T); };
  cplx acc = std::exp(-kI * p * (a + T)) * Minv(p) - std::exp(kI * p * (a + T)) * Minv(-p);
  double big = std::abs(acc);
  for (int n = 0; n * T <= a; ++n) {
    const double z = a - n * T;
    for (int s : {-1, 1}) {
      const cplx sp = double(s) * p;
      cplx f = 0.0, term = 1.0;
      for (int m = 0; m <= n; ++m) {
        if (m > 0) term *= -kI * z * (sp + lam) / double(m);
        f += term;
      }
      const cplx g = std::pow(ig, n) * std::exp(-kI * sp * T) * Minv(sp) * Minv(sp) /
                     std::pow(sp + lam, n + 1) * (std::exp(-kI * sp * z) - std::exp(kI * lam * z) * f);
      acc += (s < 0) ? g : -g;
      big = std::max(big, std::abs(g));
    }
  }
  if (scale) *scale = big / std::abs(2.0 * k.D);
  return acc / (2.0 * k.D);
}

}  // namespace

TEST_CASE("kernel at the bright and dark points") {
  const ScatteringKernel b = kernel(1.0, 0.0, 20.0 * kPi);
  CHECK(std::abs(b.s11) == 0.0);
  CHECK(std::abs(b.s21 + 1.0) < 1e-15);
  CHECK(b.p == cplx(0.0, 0.0));
  CHECK(b.resonant_bright());
  CHECK(std::abs(b.Lambda - 0.5) < 1e-15);
  CHECK(std::abs(b.M_at(0.0) - cplx(0.0, -0.5)) < 1e-15);
  CHECK(b.C_zero == cplx(-1.0, 0.0));

  for (double delta : {0.0, 0.4, -2.0}) {
    const ScatteringKernel d = kernel(1.0, delta, 21.0 * kPi);
    CHECK(d.s21 == cplx(0.0, 0.0));
    CHECK(std::abs(std::norm(d.s11) - 1.0) < 1e-15);
  }
}

TEST_CASE("kernel branch and definitions") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double gT = std::pow(10.0, -2.0 + 3.5 * U(rng));
    const ScatteringKernel k = kernel(gT, gT * (10.0 * U(rng) - 5.0), 2.0 * kPi * U(rng));
    CHECK(k.p.imag() >= 0.0);
    const cplx p2 = k.lambda * k.lambda + k.gamma * k.gamma * k.phase.e * k.phase.e;
    CHECK(std::abs(k.p * k.p - p2) <= 1e-12 * (std::norm(k.lambda) + k.gamma * k.gamma));
    const cplx D = k.p * std::cos(k.p * k.T) - kI * k.lambda * std::sin(k.p * k.T);
    const cplx ige = kI * k.gamma * k.phase.e;
    CHECK(std::abs(k.C_plus - ((k.p - k.lambda) * std::exp(kI * k.p * k.T) - ige) / (2.0 * D)) <=
          1e-10 * std::abs(k.C_plus));
    CHECK(std::abs(k.C_minus + ((-k.p - k.lambda) * std::exp(-kI * k.p * k.T) - ige) / (2.0 * D)) <=
          1e-10 * std::abs(k.C_minus));
  }
}

TEST_CASE("single-phonon unitarity") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double gT = std::pow(10.0, -3.0 + 4.7 * U(rng));
    const ScatteringKernel k = kernel(gT, gT * (20.0 * U(rng) - 10.0), 2.0 * kPi * U(rng));
    worst = std::max(worst, std::abs(std::norm(k.s11) + std::norm(k.s21) - 1.0));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("drive settings") {
  const SystemParams P = region_c();
  const DriveSettings d = DriveSettings::at_detuning(P, 0.3, 0.2, 1000.0);
  CHECK(d.omega_d == doctest::Approx(P.omega0 + 0.3));
  CHECK(d.nbar == doctest::Approx(0.04 * 1000.0 / 8.0));
  CHECK_FALSE(d.warnings(P).empty());  // nbar = 5
  const DriveSettings ok = DriveSettings::at_detuning(P, 0.0, 0.01, 1000.0);
  CHECK(ok.warnings(P).empty());
  const DriveSettings wide = DriveSettings::at_detuning(P, 0.0, 0.01, 10.0);
  CHECK_FALSE(wide.warnings(P).empty());
  DriveSettings bad = ok;
  bad.Omega = -1.0;
  CHECK_THROWS_AS(build_kernel(P, bad), ConfigError);
  // at_detuning keeps phi tied to the detuning, at_phase freezes it
  const ScatteringKernel k1 = build_kernel(P, DriveSettings::at_detuning(P, 0.3, 0.0));
  const ScatteringKernel k2 = build_kernel(P, DriveSettings::at_phase(P, 0.3, 20.0 * kPi, 0.0));
  CHECK(std::abs(k1.phase.sin - std::sin(0.3)) < 1e-14);
  CHECK(k2.phase.sin == 0.0);
}

TEST_CASE("vertex F small-atom limit and removable points") {
  for (double T : {1e-4, 1e-6}) {
    const ScatteringKernel k = kernel(T, 0.3, 0.4, T);
    double worst = 0.0;
    for (double q : {-5.0, -1.0, 0.0, 0.7, 3.0}) worst = std::max(worst, std::abs(vertex_F(k, q)));
    CHECK(worst < 20.0 * T);
  }
  // continuity across the p -> 0 switch of the odd ratios
  const double g = 1.0;
  const ScatteringKernel a = kernel(1.0, std::pow(0.99e-5, 2) / (2.0 * g), 0.0);
  const ScatteringKernel b = kernel(1.0, std::pow(1.01e-5, 2) / (2.0 * g), 0.0);
  for (double q : {0.0, 0.5, -2.0}) CHECK(std::abs(vertex_F(a, q) - vertex_F(b, q)) < 1e-8);
  CHECK_THROWS_AS(vertex_F(kernel(1.0, 0.0, kPi), 0.3), DomainError);
}

TEST_CASE("vertex F solves the integral equation") {
  // F(q) = int dw G(w)/(q - w + i0) [1/(-w + i0) + F(-w)],  G(w) = gamma/2pi e^{i w T + i phi}/(lambda - w)
  for (auto [gT, delta, phi] : {std::tuple{1.0, 0.3, 0.7}, std::tuple{2.0, -0.5, 2.5}, std::tuple{0.5, 0.2, 0.0}}) {
    const ScatteringKernel k = kernel(gT, delta * gT, phi);
    const double T = k.T, X = 2000.0 / T;
    auto G = [&](double w) {
      return k.gamma / (2.0 * kPi) * k.phase.e * std::polar(1.0, w * T) / (k.lambda - w);
    };
    // int h(w)/(c - w + i0) dw = -PV int h/(w - c) - i pi h(c)
    auto J = [&](const std::function<cplx(double)>& h, double c) {
      auto sym = [&](double s) { return s == 0.0 ? cplx(0.0) : (h(c + s) - h(c - s)) / s; };
      return -cquad(sym, 0.0, X, grid_cuts(kPi / T, X)) - kI * kPi * h(c);
    };
    for (double q : {0.6, -1.3}) {
      const cplx A = (J(G, 0.0) - J(G, q)) / q;  // partial fractions of the two poles
      const cplx B = J([&](double w) { return G(w) * vertex_F(k, -w); }, q);
      const cplx F = vertex_F(k, q);
      CHECK(std::abs(F - A - B) <= 1e-6 * std::abs(F));
    }
  }
}

TEST_CASE("transmittance correction") {
  const double r = 0.3;  // Omega / 2 gamma
  for (double gT : {1e-3, 0.2, 2.0, 20.0}) {
    const ScatteringKernel k = kernel(gT, 0.0, 40.0 * kPi);
    CHECK(std::abs(transmittance_correction(k, 2.0 * r * k.gamma) - 0.5 * r * r / (1.0 + gT)) < 1e-15);
  }
  // gamma T << 1, phi = 0: Lorentzian-squared form; the deviation is O(gamma T)
  for (double gT : {1e-4, 1e-5}) {
    const ScatteringKernel k0 = kernel(gT, 0.0, 0.0, gT);
    double worst = 0.0;
    for (double x : {-3.0, -1.0, -0.2, 0.0, 0.5, 2.0}) {
      const ScatteringKernel k = kernel(gT, 2.0 * x, 0.0, gT);
      const cplx small = (1.0 + kI * x) / std::pow(1.0 + x * x, 2);
      worst = std::max(worst, std::abs(transmittance_correction(k, 2.0 * r) / (0.5 * r * r) - small));
    }
    CHECK(worst < 3.0 * gT);
    CHECK(worst > 0.3 * gT);
    (void)k0;
  }
  // gamma T >> 1: the extra factor p/(lambda + i gamma e^{i phi}) of the long-delay form
  {
    const ScatteringKernel k = kernel(30.0, 0.5 * 30.0, 1.0);
    const cplx ige = kI * k.gamma * k.phase.e;
    const double c2 = 0.5 * k.phase.one_plus_cos;
    const cplx laR = 0.5 * r * r * 8.0 * kI * std::pow(k.gamma, 3) * c2 * c2 /
                     (std::norm(k.d) * k.d) * k.p / (k.lambda + ige);
    CHECK(std::abs(transmittance_correction(k, 2.0 * r * k.gamma) / laR - 1.0) < 1e-6);
  }
  // at gamma T = 2 the correction both raises and lowers the transmittance
  {
    int up = 0, down = 0;
    for (double x = -3.0; x <= 3.0; x += 0.05) {
      const ScatteringKernel k = kernel(2.0, x * 2.0, 40.0 * kPi + x * 2.0 * 2.0);
      const double t1 = std::norm(k.s11 + transmittance_correction(k, 2.0 * 0.5 * k.gamma));
      (t1 > std::norm(k.s11) ? up : down)++;
    }
    CHECK(up > 0);
    CHECK(down > 0);
  }
  CHECK_THROWS_AS(transmittance_correction(kernel(1.0, 0.0, 0.0), 2.5), DomainError);
  CHECK(transmittance_correction(kernel(1.0, 0.3, kPi), 0.5) == cplx(0.0, 0.0));
}

TEST_CASE("inelastic spectrum closed forms") {
  // point-like atom
  {
    const double Om = 0.4;
    const ScatteringKernel k = kernel(1e-12, 0.0, 0.0, 1e-12);
    for (double w : {0.0, 0.1, 1.0, 3.3, 25.0}) {
      const double ref = std::pow(Om / 2.0, 4) / (4.0 * kPi) * std::pow(4.0 / (w * w + 4.0), 2);
      CHECK(std::abs(inelastic_spectrum(k, Om, w) / ref - 1.0) < 1e-10);
    }
  }
  for (double gT : {0.2, 0.5, 2.0, 20.0}) {
    const ScatteringKernel k = kernel(gT, 0.0, 0.0);
    const double g = k.gamma, Om = 0.4 * g;
    for (double w : {0.0, 1e-9, 0.05, 1.0, kPi - 0.01, kPi, 4.0, 11.0}) {
      const double n = 1.0 + std::cos(w), dn = std::pow(w - g * std::sin(w), 2) + g * g * n * n;
      const double ref = std::pow(Om, 4) / (16.0 * kPi * std::pow(1.0 + gT, 2)) * std::pow(n / dn, 2);
      CHECK(std::abs(inelastic_spectrum(k, Om, w) - ref) <= 1e-10 * ref + 1e-300);
    }
  }
}

TEST_CASE("inelastic spectrum symmetry and sign") {
  const double Om = 0.3;
  for (double delta : {0.2, 1.5, 4.0}) {
    const ScatteringKernel kp = kernel(5.0, delta, 200.0 * kPi);
    const ScatteringKernel km = kernel(5.0, -delta, 200.0 * kPi);
    for (double w = -3.0; w <= 3.0; w += 0.173) {
      const double a = inelastic_spectrum(kp, Om, w), b = inelastic_spectrum(km, Om, w);
      CHECK(a >= 0.0);
      CHECK(std::abs(a - b) <= 1e-10 * a);
      CHECK(std::abs(a - inelastic_spectrum(kp, Om, -w)) <= 1e-12 * a);
    }
  }
  const ScatteringKernel dark = kernel(5.0, 0.7, 201.0 * kPi);
  for (double w : {0.0, 0.4, 2.0}) CHECK(inelastic_spectrum(dark, Om, w) == 0.0);
  CHECK(total_inelastic_power(dark, Om) == 0.0);
}

TEST_CASE("splitting of the central peak") {
  auto curv = [](double gT) { return inelastic_curvature(kernel(gT, 0.0, 0.0), 0.2); };
  CHECK(curv(0.4) < 0.0);
  CHECK(curv(0.6) > 0.0);
  double lo = 0.4, hi = 0.6;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (curv(mid) < 0.0 ? lo : hi) = mid;
  }
  CHECK(std::abs(0.5 * (lo + hi) - 0.5) < 1e-6);
}

TEST_CASE("total inelastic power and power balance") {
  const double Om = 0.2, r4 = std::pow(0.1, 4);
  // closed form against quadrature of the resonant spectrum
  for (double gT : {0.05, 1.0, 20.0}) {
    const ScatteringKernel k = kernel(gT, 0.0, 0.0);
    const double closed = total_inelastic_power(k, Om * gT);
    CHECK(closed == doctest::Approx(std::pow(Om * gT / (2.0 * gT), 4) * gT / (4.0 * (1.0 + gT))).epsilon(1e-14));
    const ScatteringKernel off = kernel(gT, 1e-9 * gT, 0.0);  // not exactly resonant: quadrature path
    CHECK(total_inelastic_power(off, Om * gT) == doctest::Approx(closed).epsilon(1e-6));
  }
  CHECK(total_inelastic_power(kernel(1e-8, 0.0, 0.0, 1e-8), Om) == doctest::Approx(0.25 * r4).epsilon(1e-7));
  CHECK(total_inelastic_power(kernel(1e3, 0.0, 0.0), Om * 1e3) * 4.0 == doctest::Approx(r4).epsilon(1.1e-3));

  const SystemParams P = region_c();
  for (double delta : {0.0, 0.3, -1.1, 2.5}) {
    const ScatteringKernel k = build_kernel(P, DriveSettings::at_detuning(P, delta, Om));
    const PowerBalance b = power_balance(k, Om);
    CHECK(b.inelastic > 0.0);
    CHECK(b.relative_error() < 1e-6);
  }
  const ScatteringKernel g = kernel(3.0, 1.2, 1.9);
  CHECK(power_balance(g, 0.3).relative_error() < 1e-6);
}

TEST_CASE("pair amplitude") {
  const SystemParams P = region_c();
  const double Om = 0.2, d = 5e3;
  const ScatteringKernel k = build_kernel(P, DriveSettings::at_detuning(P, 0.4, Om, d));
  const double ratio0 = inelastic_spectrum(k, Om, 0.3) / std::norm(pair_amplitude(k, 0.3));
  for (double w : {0.0, 0.3, 1.0, 2.9, 7.0}) {
    CHECK(inelastic_spectrum(k, Om, w) / std::norm(pair_amplitude(k, w)) == doctest::Approx(ratio0).epsilon(1e-12));
    CHECK(pair_amplitude(k, w) == pair_amplitude(k, -w));
  }
  CHECK(ratio0 == doctest::Approx(std::pow(Om, 4) * d * d / (16.0 * kPi)).epsilon(1e-12));
  const SystemParams D = SystemParams::from_dimensionless(1.0, 21.0 * kPi);
  const ScatteringKernel dk = build_kernel(D, DriveSettings::at_phase(D, 0.4, 21.0 * kPi, Om, d));
  CHECK(pair_amplitude(dk, 0.5) == cplx(0.0, 0.0));
  CHECK_THROWS_AS(pair_amplitude(kernel(1.0, 0.4, 0.0), 0.5), ConfigError);
}

TEST_CASE("I0 against the term-by-term sum") {
  for (auto [gT, delta, phi] : {std::tuple{1.0, 0.3, 0.7}, std::tuple{5.0, -1.0, 2.0}, std::tuple{0.3, 0.1, 0.0}}) {
    const ScatteringKernel k = kernel(gT, delta * gT, phi);
    for (double tau : {0.0, 0.3, 1.0, 1.7, 2.5, 4.2}) {
      double s0 = 0, sm = 0, sp = 0;
      const cplx ref = I0_naive(k, tau, &s0);
      const cplx ref1 = 0.5 * (I0_naive(k, tau - 1.0, &sm) + I0_naive(k, tau + 1.0, &sp));
      const auto [i0, i1] = correlation_I(k, tau);
      CHECK(std::abs(i0 - ref) <= 1e-12 + 1e-14 * s0);
      CHECK(std::abs(i1 - ref1) <= 1e-12 + 1e-14 * std::max(sm, sp));
      const auto [j0, j1] = correlation_I(k, -tau);
      CHECK(j0 == i0);
      (void)j1;
    }
  }
}

TEST_CASE("I0 against its integral representation") {
  // I0 = M^{-1}(0)/(pi i) int M(q) (1/q + F(q)) cos(q tau) dq, 1/q as a principal value
  for (auto [gT, tau] : {std::pair{1.0, 0.37}, std::pair{1.0, 1.6}, std::pair{5.0, 4.2}, std::pair{5.0, 5.2}}) {
    const ScatteringKernel k = kernel(gT, 0.4 * gT, 0.9);
    const double X = 4000.0;
    auto sym = [&](double q) {
      const cplx pv = q == 0.0 ? cplx(0.0) : (k.M_at(q) - k.M_at(-q)) / q;
      return (pv + k.M_at(q) * vertex_F(k, q) + k.M_at(-q) * vertex_F(k, -q)) * std::cos(q * tau);
    };
    std::vector<double> cuts = grid_cuts(kPi / tau, X);
    const std::vector<double> c2 = grid_cuts(kPi, X);
    cuts.insert(cuts.end(), c2.begin(), c2.end());
    std::sort(cuts.begin(), cuts.end());
    const cplx ref = cquad(sym, 0.0, X, cuts) / (k.M_at(0.0) * kPi * kI);
    CHECK(std::abs(correlation_I(k, tau).first - ref) < 1e-6);
  }
}

TEST_CASE("I0 small-atom limit and degenerate guard") {
  const double T = 1e-4;
  const ScatteringKernel k = kernel(T, 0.3, 0.8, T);
  const cplx rate = k.lambda + kI * k.gamma * k.phase.e;
  for (double tau : {0.0, 0.5, 2.0}) {
    const auto [i0, i1] = correlation_I(k, tau);
    CHECK(std::abs(i0 - std::exp(kI * rate * tau)) < 1e-3);
    CHECK(std::abs(i1 - std::exp(kI * rate * tau)) < 1e-3);
  }
  CHECK_THROWS_AS(correlation_I(kernel(1.0, 0.0, 0.0), 0.5), DomainError);
}

TEST_CASE("g2 small atom") {
  const double T = 1e-4;
  for (auto [delta, phi] : {std::pair{0.0, 0.0}, std::pair{0.5, 0.6}, std::pair{-0.3, 2.0}}) {
    const ScatteringKernel k = kernel(T, delta, phi, T);
    const cplx rate = cplx(delta - k.gamma * k.phase.sin, 0.0) + kI * k.gamma * k.phase.one_plus_cos;
    for (double tau : {0.0, 0.2, 1.0, 3.0}) {
      const CorrelationRow row = g2_functions(k, tau);
      REQUIRE(row.g22.has_value());
      CHECK(std::abs(*row.g22 - std::norm(1.0 - std::exp(kI * rate * tau))) < 2e-3);
    }
  }
}

TEST_CASE("g2 on resonance with a bright phase") {
  for (double gT : {0.2, 1.0, 20.0}) {
    const ScatteringKernel k = kernel(gT, 0.0, 0.0);
    for (double tau : {0.0, 0.5, 1.0, 1.3, 2.0, 3.7}) {
      const CorrelationRow row = g2_functions(k, tau);
      CHECK(row.G11 == doctest::Approx(row.G12).epsilon(1e-14));
      CHECK(*row.g22 == doctest::Approx(g22_resonant_kinks(k, tau)).epsilon(1e-14));
      CHECK_FALSE(row.g11.has_value());
      CHECK_FALSE(row.g12.has_value());
    }
  }
  // just off p = 0 the explicit sums apply and G11 = G12 = |I0 + I1|^2 / 4
  const ScatteringKernel k = kernel(1.0, 1e-4, 0.0);
  for (double tau : {0.0, 0.7, 2.2}) {
    const auto [i0, i1] = correlation_I(k, tau);
    const CorrelationRow row = g2_functions(k, tau);
    CHECK(std::abs(row.G11 - 0.25 * std::norm(i0 + i1)) < 1e-6);
    CHECK(std::abs(row.G12 - 0.25 * std::norm(i0 + i1)) < 1e-6);
  }
}

TEST_CASE("g2 explicit sums approach the kink series") {
  for (double gT : {0.2, 1.0, 5.0, 20.0}) {
    const ScatteringKernel kr = kernel(gT, 0.0, 0.0);
    for (double pT : {1e-3, 1e-4, 1e-5}) {
      const ScatteringKernel k = kernel(gT, pT * pT / (2.0 * gT), 0.0);
      CHECK(std::abs(std::abs(k.p) - pT) < 1e-3 * pT);
      double worst = 0.0;
      for (double tau = 0.0; tau <= 6.0; tau += 0.05)
        worst = std::max(worst, std::abs(*g2_functions(k, tau).g22 - g22_resonant_kinks(kr, tau)));
      CHECK(worst < 1e-4);
    }
  }
}

TEST_CASE("kink series") {
  CHECK(g22_resonant_kinks(kernel(1.0, 0.0, 0.0), 0.0) == doctest::Approx(0.25).epsilon(1e-15));
  const ScatteringKernel tiny = kernel(1e-3, 0.0, 0.0);
  CHECK(g22_resonant_kinks(tiny, 0.0) < 1.1e-6);
  // gamma T >> 1: kink n is (2/gamma T) K_n above 1, odd kinks rising
  const double gT = 200.0;
  const ScatteringKernel k = kernel(gT, 0.0, 0.0);
  for (int n = 1; n <= 4; ++n) {
    const double z = n / gT;  // maximum of (gamma z)^n e^{-gamma z}
    const double Kn = (n % 2 ? 1.0 : -1.0) * std::exp(-n) * std::pow(n, n) / std::tgamma(n + 1.0);
    const double excess = g22_resonant_kinks(k, n + z) - 1.0;
    CHECK(excess * (n % 2 ? 1.0 : -1.0) > 0.0);
    CHECK(excess == doctest::Approx(2.0 / gT * Kn).epsilon(2e-2));
  }
  CHECK_THROWS_AS(g22_resonant_kinks(kernel(1.0, 0.5, 0.0), 0.3), DomainError);
  CHECK_THROWS_AS(g22_resonant_kinks(kernel(1.0, 0.0, kPi), 0.3), DomainError);
}

TEST_CASE("cross-correlation bounded by the transmitted one at zero delay") {
  for (double gT : {0.3, 1.0, 4.0}) {
    for (double phi = 0.0; phi < 2.0 * kPi; phi += 2.0 * kPi / 64) {
      const CorrelationRow row = g2_functions(kernel(gT, 0.0, phi), 0.0);
      CHECK(row.G11 >= row.G12 - 1e-14);
      CHECK(row.G11 >= 0.0);
      CHECK(row.G12 >= 0.0);
    }
  }
  const CorrelationRow d = g2_functions(kernel(1.0, 0.0, kPi), 0.0);
  CHECK(d.G11 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.G12 == 0.0);
  const CorrelationRow near = g2_functions(kernel(1.0, 0.0, kPi - 1e-3), 0.0);
  CHECK(near.G11 == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(near.G12 < 1e-10);

  const CorrelationResult table = correlation_table(kernel(1.0, 0.3, 0.5), {0.0, 0.5, 1.0});
  CHECK(table.rows.size() == 3);
  CHECK(table.rows[1].tau == 0.5);
}
