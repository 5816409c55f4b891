#pragma once

#include <vector>

#include <Eigen/Dense>

#include "giant_atom/numerics.hpp"
#include "giant_atom/phase.hpp"
#include "giant_atom/single_excitation.hpp"

namespace giant_atom {

using Mat2 = Eigen::Matrix2cd;

/// Basis |g> = 0, |e> = 1.
Mat2 ground_state();
Mat2 excited_state();

struct CascadeOptions {
  int max_k = 6;           // memory guard on the copy count
  int steps_per_T = 2000;  // RK4 steps per delay in auxiliary time
};

/// k-copy chain for the delayed master equation, frame rotating at the drive.
/// Copy l (1-based) is switched off for s > t - (l-1) T; only the last copy
/// switches inside [0, T] unless k is forced above ceil(t/T).
struct ChainSpec {
  int k = 1;
  double gamma = 1.0;
  double delay_T = 1.0;
  double delta = 0.0;  // H_S = delta |e><e| + (Omega/2)(sigma_- + sigma_+)
  double Omega = 0.0;
  double phi = 0.0;
  PhaseFactor phase;
  double t = 0.0;
  /// H_{l,l+1} and L_{l,l+1}, l = 0..k, as 2^k x 2^k matrices with every copy active.
  std::vector<Eigen::MatrixXcd> H_link, L_link;

  int dim() const { return 1 << k; }
  /// Auxiliary time at which copy l (1-based) switches off, clipped to [0, T].
  double switch_time(int l) const;
  /// Number of active copies at auxiliary time s (a prefix 1..m).
  int active_at(double s) const;
  /// Links with copies beyond m removed.
  void links(int m, std::vector<Eigen::MatrixXcd>& H, std::vector<Eigen::MatrixXcd>& L) const;
};

/// ceil(t/T) with integers snapped, at least 1.
int copy_count(double t, double T);

/// Chain for time t; k_override > 0 forces a larger copy count (the extra copies stay off).
ChainSpec build_chain(const SystemParams& params, double delta, double Omega, double phi, double t,
                      const CascadeOptions& opt = {}, int k_override = 0);

/// E_T(t) on vectorized k-copy operators. Each copy contributes one base-4 digit
/// 2i + j for |i><j|, copy 1 most significant.
struct SuperPropagator {
  int k = 1;
  double t = 0.0;
  Eigen::MatrixXcd E;
};

SuperPropagator propagate(const ChainSpec& chain, const CascadeOptions& opt = {});

struct ReducedState {
  double t = 0.0;
  Mat2 rho = Mat2::Zero();

  double trace() const { return rho.trace().real(); }
  double excited_population() const { return rho(1, 1).real(); }
  double hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }
  double min_eigenvalue() const;
};

/// Iterated generalized partial traces, (S2,S1) first. ConsistencyError if the
/// trace moves by more than 1e-6.
ReducedState reduced_state(const SuperPropagator& prop, const Mat2& initial);

struct OutputObservables {
  double t = 0.0;
  Mat2 rho = Mat2::Zero();        // atom at t
  double population = 0.0;        // <sigma+ sigma->(t)
  double population_delayed = 0;  // <sigma+ sigma->(t - T), zero for t < T
  cplx lag_coherence = 0.0;       // <sigma+(t) sigma-(t - T)>
  double n_out = 0.0;             // output flux at leg A, (1/2)<L+ L> on the current link
};

OutputObservables output_observables(const ChainSpec& chain, const Mat2& initial,
                                     const CascadeOptions& opt = {});

/// Observables on t = j T / samples_per_T up to t_max. samples_per_T must divide steps_per_T.
std::vector<OutputObservables> cascade_trajectory(const SystemParams& params, double delta, double Omega,
                                                  double phi, const Mat2& initial, double t_max,
                                                  int samples_per_T, const CascadeOptions& opt = {});

/// G22(t0, tau) = <a+(t0) a+(t0+tau) a(t0+tau) a(t0)> at leg A via delayed regression.
double delayed_g2(const SystemParams& params, double delta, double Omega, double phi, const Mat2& initial,
                  double t0, double tau, const CascadeOptions& opt = {});

/// G22(0, tau) on the trajectory grid; tau = 0 is the first sample.
std::vector<double> delayed_g2_from_zero(const SystemParams& params, double delta, double Omega, double phi,
                                         const Mat2& initial, double tau_max, int samples_per_T,
                                         const CascadeOptions& opt = {});

/// Resonant excited population for t < T (decay 2 gamma): closed-form Torrey transient.
/// DomainError for t >= T.
double markov_benchmark(const SystemParams& params, double Omega, double t);

}  // namespace giant_atom
