#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "giant_atom/numerics.hpp"

namespace giant_atom {

/// One giant atom: per-leg rate gamma, transition frequency omega0, leg delay T.
/// Units are free; everything physical depends on gamma*T and omega0*T only.
struct SystemParams {
  double gamma = 1.0;
  double omega0 = 20.0 * kPi;
  double delay_T = 1.0;

  static SystemParams from_dimensionless(double gammaT, double omega0T, double T = 1.0);

  double gammaT() const { return gamma * delay_T; }
  double omega0T() const { return omega0 * delay_T; }
  /// Delta = omega0 T / pi mod 2, in [0,2); snapped to an integer within 1e-9.
  double residual_phase() const;
  /// e^{i omega0 T}, built from the residual phase so that dark/bright values are exact.
  cplx feedback_phase() const;
  /// True if omega0 T = (2n+1) pi within 1e-9 (relative).
  bool is_dark() const;
  /// Advisory messages (RWA guard); empty when the parameters are comfortable.
  std::vector<std::string> warnings() const;
  /// ConfigError unless gamma > 0, T > 0 and all fields finite.
  void validate() const;
};

/// Canonical parameter sets, T = 1.
SystemParams region_b();  // gammaT = 0.045, omega0T = 2.4 pi
SystemParams region_c();  // gammaT = 1,     omega0T = 20 pi
SystemParams region_d();  // gammaT = 37.5,  omega0T = 2000 pi

/// A pole of 1/(w - w0 + i g + i g e^{i w T}).
struct ComplexMode {
  int k = 0;             // Lambert branch index
  cplx omega;            // lab frequency
  cplx offset;           // omega - omega0, kept separately for precision
  cplx residue_weight;   // 1 / (1 - gamma T e^{i omega T})
};

/// Sampled e(t) on a uniform grid. Samples are stored in the frame rotating
/// at omega0 (e~ = e^{i omega0 t} e); lab() restores the fast phase.
struct AmplitudeTrace {
  enum class Frame { lab, rotating };

  SystemParams params;
  DelayHistory history;
  Frame frame = Frame::rotating;
  cplx drive_amplitude = 0.0;  // A of alpha_A^in = A e^{-i omega_d t}; zero if undriven
  double omega_d = 0.0;

  double dt() const { return history.grid_step; }
  double horizon() const { return history.horizon(); }
  std::size_t size() const { return history.samples.size(); }
  double time(std::size_t n) const { return history.grid_step * static_cast<double>(n); }
  /// Rotating-frame value; zero for t < 0.
  cplx at(double t) const { return history.value_at(t); }
  /// Lab-frame value e(t).
  cplx lab(double t) const;
  /// e~(t) + e^{i omega0 T} e~(t - T): the two-leg emission in the rotating frame.
  cplx leg_sum(double t) const;
};

/// Per-leg spectra evaluation with the dark point tagged instead of returning Inf.
struct SpectrumValue {
  double value = 0.0;
  bool dark_singularity = false;
  /// Amplitude of the surviving dark mode, 1/(1+gamma T); S0 ~ omega0 |w|^2 / (omega-omega0)^2 nearby.
  double residue = 0.0;
};

struct EnergyLedger {
  std::vector<double> times;
  std::vector<double> E_P;  // phonons between the legs, units of hbar omega0
  std::vector<double> E_T;  // E_P + |e|^2
  /// Energy leaving through one leg during [mT, (m+1)T), index m.
  std::vector<double> pulse_energies;
};

struct ModeSum {
  cplx value;
  std::size_t mode_count = 0;
};

struct FrequencyInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// gamma0 (1 - cos N phi)/(1 - cos phi); N^2 gamma0 at phi = 2 pi n. DomainError for N <= 0.
double effective_gamma(double gamma0, int N, double phase);

/// Finite series for spontaneous decay, evaluated term by term in the log domain.
cplx spontaneous_series(const SystemParams& p, double t, cplx e0 = 1.0);
/// Same, in the frame rotating at omega0.
cplx spontaneous_series_rotating(const SystemParams& p, double t, cplx e0 = 1.0);

/// Default truncation |k| <= ceil(5 gamma T / pi) + 5.
std::pair<int, int> default_mode_range(const SystemParams& p);
/// Poles for branches k_min..k_max, Newton-polished and checked.
std::vector<ComplexMode> mode_frequencies(const SystemParams& p, int k_min, int k_max);
/// e0 * sum_k w_k e^{-i omega_k t} (lab frame).
ModeSum mode_sum_amplitude(const std::vector<ComplexMode>& modes, const SystemParams& p, double t, cplx e0 = 1.0);
/// Same sum in the rotating frame.
ModeSum mode_sum_rotating(const std::vector<ComplexMode>& modes, double t, cplx e0 = 1.0);

/// omega0 / |omega - omega0 + i gamma (1 + e^{i omega T})|^2.
SpectrumValue atom_power_spectrum(const SystemParams& p, double omega);
/// gamma (1 + cos omega T) / |omega - omega0 + i gamma (1 + e^{i omega T})|^2.
/// At the dark point the 0/0 is replaced by its limit and tagged.
SpectrumValue output_power_spectrum(const SystemParams& p, double omega);

/// Integrator step used by default: T/1024 halved until <= 0.02/gamma.
double default_step(const SystemParams& p);
/// Spontaneous decay from e(0) = e0 via the delay integrator.
AmplitudeTrace spontaneous_trace(const SystemParams& p, double horizon, cplx e0 = 1.0, double step = 0.0);
/// Ground-state atom driven from leg A by A e^{-i omega_d t}, t >= 0.
AmplitudeTrace driven_amplitude(const SystemParams& p, cplx drive_amplitude, double omega_d, double horizon,
                                double step = 0.0);

/// alpha_A^out(t) = -i sqrt(gamma/2) [e(t) + e(t-T)] (lab frame, v_g = 1).
cplx output_field(const AmplitudeTrace& trace, double t);
/// alpha_B^out(t) = alpha_A^in(t-T) + the same emission term.
cplx transmitted_field(const AmplitudeTrace& trace, double t);

/// E_P(t) = gamma int_0^T |e(t-tau)|^2 dtau and E_T = E_P + |e|^2 at every
/// `stride`-th grid time, plus the per-leg pulse energies for complete windows.
/// With `exact_overlap` the counter-propagating interference term is added to E_P.
EnergyLedger stored_energies(const AmplitudeTrace& trace, std::size_t stride = 1, bool exact_overlap = false);

/// Long-time reflectance R and transmittance 1 - R for a drive at omega_d.
std::pair<double, double> reflectance_transmittance(const SystemParams& p, double omega_d);
/// Same, parametrized by the detuning delta = omega_d - omega0 (no cancellation).
std::pair<double, double> reflectance_at_detuning(const SystemParams& p, double delta);

/// Roots of omega_d = omega0 + gamma sin(omega_d T) inside the bracket.
std::vector<double> total_reflection_frequencies(const SystemParams& p, FrequencyInterval bracket);

/// |e(infinity)| = 1/(1 + gamma T) for a dark atom; DomainError otherwise.
double dark_state_amplitude(const SystemParams& p);

}  // namespace giant_atom
