#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "giant_atom/numerics.hpp"
#include "giant_atom/phase.hpp"
#include "giant_atom/single_excitation.hpp"

namespace giant_atom {

/// Weak coherent drive. The phase phi = omega_d T is kept as pi * phase_residual + phase_offset
/// so that the bright (phi = 2k pi) and dark (phi = (2k+1) pi) points are exact.
struct DriveSettings {
  double omega_d = 0.0;
  double delta = 0.0;         // omega_d - omega0
  double phi = 0.0;           // omega_d T (informational; the kernel uses the split form)
  double phase_residual = 0;  // in [0, 2)
  double phase_offset = 0;
  double Omega = 0.0;         // Rabi rate, Omega = sqrt(8 gamma f)
  double nbar = 0.0;          // mean phonon number in a pulse of length d
  double pulse_length = 0.0;  // d; 0 means unspecified

  /// phi follows the detuning, phi = omega0 T + delta T.
  static DriveSettings at_detuning(const SystemParams& p, double delta, double Omega,
                                   double pulse_length = 0.0);
  /// phi held fixed while delta varies (detuning sweeps at fixed omega_d T).
  static DriveSettings at_phase(const SystemParams& p, double delta, double phi, double Omega,
                                double pulse_length = 0.0);

  std::vector<std::string> warnings(const SystemParams& p) const;
  void validate() const;
};

struct ScatteringKernel {
  double gamma = 1.0;
  double T = 1.0;
  double delta = 0.0;
  PhaseFactor phase;       // e^{i phi}
  double pulse_length = 0.0;

  cplx lambda;             // delta + i gamma
  cplx d;                  // lambda + i gamma e^{i phi}
  cplx p;                  // Im p > 0
  cplx D;                  // p cos pT - i lambda sin pT
  cplx C_plus, C_minus;    // NaN when p = 0; evaluators use the p -> 0 limits
  cplx C_zero{-1.0, 0.0};
  cplx s11, s21;
  cplx Lambda;

  double reflectance() const { return std::norm(s21); }
  /// 1 / (q + lambda + i gamma e^{i q T + i phi})
  cplx M_at(double q) const;
  /// |p| T at or below eps (default threshold of the explicit correlation sums).
  bool p_degenerate(double eps = 1e-6) const { return std::abs(p) * T <= eps; }
  /// delta = 0 and phi = 2k pi exactly.
  bool resonant_bright() const { return delta == 0.0 && phase.one_plus_cos == 2.0; }
};

ScatteringKernel build_kernel(const SystemParams& params, const DriveSettings& drive);

/// F(q); DomainError at the dark resonance where lambda + i gamma e^{i phi} = 0.
cplx vertex_F(const ScatteringKernel& k, double q);

/// Leading nonlinear correction to s11; DomainError unless 0 <= Omega/(2 gamma) < 1.
cplx transmittance_correction(const ScatteringKernel& k, double Omega);

double inelastic_spectrum(const ScatteringKernel& k, double Omega, double omega);

/// d^2 S_inel / d omega^2 at omega = 0 (Richardson-extrapolated central difference).
double inelastic_curvature(const ScatteringKernel& k, double Omega);

/// Integral of S_inel over the real line. Closed form at resonant_bright(), quadrature otherwise.
double total_inelastic_power(const ScatteringKernel& k, double Omega);

/// Both sides of the O(Omega^4) power balance; they cancel for an exact kernel.
struct PowerBalance {
  double elastic = 0.0;    // -(4 gamma)^-2 Omega^4 R sum_a Im[s_a* Lambda M(0)]
  double inelastic = 0.0;  // 2 * integral of S_inel
  double relative_error() const;
};
PowerBalance power_balance(const ScatteringKernel& k, double Omega);

/// Pair amplitude psi(omega); needs a positive finite pulse length.
cplx pair_amplitude(const ScatteringKernel& k, double omega);

/// (I0(tau), I1(tau)); DomainError when |p| T <= eps_p (use g22_resonant_kinks there).
std::pair<cplx, cplx> correlation_I(const ScatteringKernel& k, double tau, double eps_p = 1e-6);

struct CorrelationRow {
  double tau = 0.0;
  // Normalized functions; empty where the single-phonon factor vanishes (pole of kappa).
  std::optional<double> g11, g22, g12;
  double G11 = 0.0, G12 = 0.0, G22 = 0.0;
};

struct CorrelationResult {
  std::vector<CorrelationRow> rows;
};

CorrelationRow g2_functions(const ScatteringKernel& k, double tau);
CorrelationResult correlation_table(const ScatteringKernel& k, const std::vector<double>& taus);

/// Exact g22 at p = 0 (delta = 0, phi = 2k pi); DomainError elsewhere.
double g22_resonant_kinks(const ScatteringKernel& k, double tau);

}  // namespace giant_atom
