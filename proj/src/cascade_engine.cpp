#include "giant_atom/cascade_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include "giant_atom/errors.hpp"

namespace giant_atom {

namespace {

using Eigen::MatrixXcd;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<cplx>;

Mat2 sigma_minus() {
  Mat2 s = Mat2::Zero();
  s(0, 1) = 1.0;
  return s;
}

Mat2 number_op() {
  Mat2 n = Mat2::Zero();
  n(1, 1) = 1.0;
  return n;
}

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// X acting on copy l (1-based) of k copies; copy 1 is the most significant factor.
MatrixXcd on_copy(const Mat2& X, int l, int k) {
  MatrixXcd out = MatrixXcd::Identity(1, 1);
  for (int c = 1; c <= k; ++c) out = kron(out, c == l ? MatrixXcd(X) : MatrixXcd::Identity(2, 2));
  return out;
}

long pow4(int k) { return 1L << (2 * k); }

/// Paired index of |I><J|: bit b of I goes to bit 2b+1, bit b of J to bit 2b.
struct PairIndex {
  std::vector<long> spread;
  explicit PairIndex(int k) : spread(std::size_t(1) << k) {
    for (std::size_t v = 0; v < spread.size(); ++v) {
      long s = 0;
      for (int b = 0; b < k; ++b)
        if (v >> b & 1) s |= 1L << (2 * b);
      spread[v] = s;
    }
  }
  long operator()(long I, long J) const { return 2 * spread[I] + spread[J]; }
};

struct Entry {
  long r, c;
  cplx v;
};

std::vector<Entry> nonzeros(const MatrixXcd& m) {
  std::vector<Entry> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != cplx(0.0)) out.push_back({i, j, m(i, j)});
  return out;
}

/// Superoperator of rho -> L rho L^dagger.
void jump_triplets(const MatrixXcd& L, const PairIndex& P, std::vector<Triplet>& out) {
  const auto nz = nonzeros(L);
  for (const auto& a : nz)
    for (const auto& b : nz) out.emplace_back(P(a.r, b.r), P(a.c, b.c), a.v * std::conj(b.v));
}

SpMat jump_super(const MatrixXcd& L, int k) {
  PairIndex P(k);
  std::vector<Triplet> trips;
  jump_triplets(L, P, trips);
  SpMat S(pow4(k), pow4(k));
  S.setFromTriplets(trips.begin(), trips.end());
  return S;
}

/// Lindblad generator sum_l { -(i/2)[H_l, .] + D[L_l] } in the paired ordering.
SpMat generator(const std::vector<MatrixXcd>& H, const std::vector<MatrixXcd>& L, int k) {
  const long d = 1L << k;
  PairIndex P(k);
  MatrixXcd Heff = MatrixXcd::Zero(d, d);
  for (const auto& h : H) Heff += 0.5 * h;
  for (const auto& l : L) Heff -= 0.5 * kI * (l.adjoint() * l);
  std::vector<Triplet> trips;
  for (const auto& e : nonzeros(Heff)) {
    for (long J = 0; J < d; ++J) trips.emplace_back(P(e.r, J), P(e.c, J), -kI * e.v);
    // rho Heff^dagger: (rho Y)_{IJ} with Y_{KJ} = conj(Heff_{JK})
    for (long I = 0; I < d; ++I) trips.emplace_back(P(I, e.r), P(I, e.c), kI * std::conj(e.v));
  }
  for (const auto& l : L) jump_triplets(l, P, trips);
  SpMat A(d * d, d * d);
  A.setFromTriplets(trips.begin(), trips.end());
  A.prune(cplx(0.0));
  return A;
}

SpMat chain_generator(const ChainSpec& c, int m) {
  std::vector<MatrixXcd> H, L;
  c.links(m, H, L);
  return generator(H, L, c.k);
}

/// One RK4 step of x' = A x as the polynomial sum_{n<=4} (hA)^n/n!.
MatrixXcd rk4_polynomial(const SpMat& A, double h) {
  const Eigen::Index N = A.rows();
  const MatrixXcd I = MatrixXcd::Identity(N, N);
  MatrixXcd B = I;
  for (int n = 4; n >= 1; --n) {
    MatrixXcd AB = A * B;
    B = I + (h / n) * AB;
  }
  return B;
}

MatrixXcd matrix_power(MatrixXcd base, long n) {
  MatrixXcd out = MatrixXcd::Identity(base.rows(), base.cols());
  bool first = true;
  while (n > 0) {
    if (n & 1) {
      if (first) {
        out = base;
        first = false;
      } else {
        out = (out * base).eval();
      }
    }
    n >>= 1;
    if (n > 0) base = (base * base).eval();
  }
  return out;
}

long step_count(double len, double h_max) {
  if (len <= 0.0) return 0;
  return std::max(1L, static_cast<long>(std::ceil(len / h_max - 1e-9)));
}

/// n RK4 steps of size h applied to the columns of X. Large bundles go through
/// the dense step matrix raised to the n-th power; the arithmetic is the same map.
void rk4_apply(const SpMat& A, MatrixXcd& X, double h, long n) {
  if (n <= 0) return;
  if (!std::isfinite(h) || h <= 0.0) throw IntegrationError("cascade: invalid auxiliary step");
  const double N = static_cast<double>(A.rows());
  const double nnz = static_cast<double>(A.nonZeros());
  const double cols = static_cast<double>(X.cols());
  // sparse products run about 10x slower per multiply-add than blocked dense ones
  const double sequential = 10.0 * static_cast<double>(n) * 4.0 * nnz * cols;
  const double powered = 40.0 * nnz * N + 2.0 * std::ceil(std::log2(double(n) + 1.0)) * N * N * N + N * N * cols;
  if (sequential <= powered) {
    MatrixXcd Y;
    for (long s = 0; s < n; ++s) {
      Y = X;
      for (int m = 4; m >= 1; --m) {
        MatrixXcd AY = A * Y;
        Y = X + (h / m) * AY;
      }
      X.swap(Y);
    }
  } else {
    X = (matrix_power(rk4_polynomial(A, h), n) * X).eval();
  }
  if (!X.allFinite()) throw IntegrationError("cascade: propagation produced non-finite values");
}

void evolve(const SpMat& A, MatrixXcd& X, double len, double h_max) {
  const long n = step_count(len, h_max);
  if (n > 0) rk4_apply(A, X, len / static_cast<double>(n), n);
}

/// Columns rho0 (x) |x> for every basis operator x on copies 2..K.
MatrixXcd input_bundle(const Mat2& rho0, int K) {
  const long NB = pow4(K - 1);
  MatrixXcd V = MatrixXcd::Zero(pow4(K), NB);
  for (int c = 0; c < 2; ++c)
    for (int d = 0; d < 2; ++d)
      for (long x = 0; x < NB; ++x) V((2 * c + d) * NB + x, x) = rho0(c, d);
  return V;
}

/// rho[ab] = sum_{x,y} Q[x,y] V[4y + ab, x]: the last copy's output with copies
/// 1..K-1 carried to s = T by Q and closed against the inputs.
Mat2 contract(const MatrixXcd& Q, const MatrixXcd& V) {
  Mat2 rho = Mat2::Zero();
  const Eigen::Index NB = Q.rows();
  for (int ab = 0; ab < 4; ++ab) {
    cplx s = 0.0;
    for (Eigen::Index y = 0; y < NB; ++y)
      for (Eigen::Index x = 0; x < NB; ++x) s += Q(x, y) * V(4 * y + ab, x);
    rho(ab / 2, ab % 2) = s;
  }
  return rho;
}

/// rho -> A rho B^dagger on the last two copies of every column (A, B indexed 2 i_{K-1} + i_K).
MatrixXcd sandwich_last_two(const Eigen::Matrix4cd& A, const Eigen::Matrix4cd& B, const MatrixXcd& V) {
  static const int sp[4] = {0, 1, 4, 5};
  Eigen::Matrix<cplx, 16, 16> S = Eigen::Matrix<cplx, 16, 16>::Zero();
  for (int I = 0; I < 4; ++I)
    for (int J = 0; J < 4; ++J)
      for (int K = 0; K < 4; ++K)
        for (int M = 0; M < 4; ++M) S(2 * sp[I] + sp[J], 2 * sp[K] + sp[M]) += A(I, K) * std::conj(B(J, M));
  MatrixXcd W(V.rows(), V.cols());
  for (Eigen::Index z = 0; z < V.rows() / 16; ++z) W.middleRows(z * 16, 16).noalias() = S * V.middleRows(z * 16, 16);
  return W;
}

Eigen::Matrix4cd two_copy(const Mat2& a, const Mat2& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

struct Drive {
  double gamma, T, delta, Omega, phi;
  PhaseFactor phase;
};

Drive drive_of(const SystemParams& p, double delta, double Omega, double phi) {
  p.validate();
  if (!std::isfinite(delta) || !std::isfinite(Omega) || !std::isfinite(phi))
    throw ConfigError("cascade: drive parameters must be finite");
  if (Omega < 0.0) throw ConfigError("cascade: Omega must be >= 0");
  return {p.gamma, p.delay_T, delta, Omega, phi, phase_factor(residual_of(phi), 0.0)};
}

ChainSpec make_chain(const Drive& dr, int k, double t) {
  ChainSpec c;
  c.k = k;
  c.gamma = dr.gamma;
  c.delay_T = dr.T;
  c.delta = dr.delta;
  c.Omega = dr.Omega;
  c.phi = dr.phi;
  c.phase = dr.phase;
  c.t = t;
  c.links(k, c.H_link, c.L_link);
  return c;
}

void check_initial(const Mat2& rho) {
  if (!rho.allFinite()) throw ConfigError("cascade: initial state must be finite");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw ConfigError("cascade: initial state not Hermitian");
}

/// Observables at auxiliary time tau of window K from the forward bundle V
/// and the (K-1)-copy propagator Q over the rest of [tau, T].
OutputObservables window_observables(const MatrixXcd& Q, const MatrixXcd& V, int K, const Drive& dr, double t) {
  OutputObservables o;
  o.t = t;
  const Mat2 sm = sigma_minus();
  if (K == 1) {
    o.rho << V(0, 0), V(1, 0), V(2, 0), V(3, 0);
    o.population = o.rho(1, 1).real();
    o.n_out = 0.5 * dr.gamma * o.population;
    return o;
  }
  o.rho = contract(Q, V);
  o.population = o.rho(1, 1).real();
  const Mat2 id = Mat2::Identity();
  // annihilators act from the left, creators from the right, as in the regression formula
  auto expect = [&](const Eigen::Matrix4cd& A, const Eigen::Matrix4cd& B) {
    return contract(Q, sandwich_last_two(A, B, V)).trace();
  };
  const Eigen::Matrix4cd s_prev = two_copy(sm, id), s_now = two_copy(id, sm);
  o.population_delayed = expect(s_prev, s_prev).real();
  o.lag_coherence = expect(s_prev, s_now);
  const Eigen::Matrix4cd L = std::sqrt(dr.gamma) * (s_prev + std::conj(dr.phase.e) * s_now);
  o.n_out = 0.5 * expect(L, L).real();
  return o;
}

}  // namespace

Mat2 ground_state() {
  Mat2 r = Mat2::Zero();
  r(0, 0) = 1.0;
  return r;
}

Mat2 excited_state() {
  Mat2 r = Mat2::Zero();
  r(1, 1) = 1.0;
  return r;
}

double ChainSpec::switch_time(int l) const {
  const double s = t - (l - 1) * delay_T;
  return std::clamp(s, 0.0, delay_T);
}

int ChainSpec::active_at(double s) const {
  int m = 0;
  for (int l = 1; l <= k; ++l)
    if (t - (l - 1) * delay_T >= s) m = l;
  return m;
}

void ChainSpec::links(int m, std::vector<MatrixXcd>& H, std::vector<MatrixXcd>& L) const {
  const long d = 1L << k;
  const MatrixXcd zero = MatrixXcd::Zero(d, d);
  const Mat2 sm = sigma_minus();
  const Mat2 hs = delta * number_op() + 0.5 * Omega * (sm + sm.adjoint());
  std::vector<MatrixXcd> s(k + 2, zero), h(k + 2, zero);
  for (int l = 1; l <= std::min(m, k); ++l) {
    s[l] = on_copy(sm, l, k);
    h[l] = on_copy(hs, l, k);
  }
  const double rg = std::sqrt(gamma);
  const cplx em = std::conj(phase.e);  // e^{-i phi}
  H.assign(k + 1, zero);
  L.assign(k + 1, zero);
  H[0] = h[1];
  L[0] = rg * em * s[1];
  for (int l = 1; l < k; ++l) {
    const MatrixXcd hop = em * s[l].adjoint() * s[l + 1];
    H[l] = h[l] + h[l + 1] + kI * gamma * (hop - MatrixXcd(hop.adjoint()));
    L[l] = rg * (s[l] + em * s[l + 1]);
  }
  H[k] = h[k];
  L[k] = rg * s[k];
}

int copy_count(double t, double T) {
  double r = t / T;
  const double n = std::round(r);
  if (std::abs(r - n) <= 1e-12 * std::max(1.0, std::abs(r))) r = n;
  return std::max(1, static_cast<int>(std::ceil(r)));
}

ChainSpec build_chain(const SystemParams& params, double delta, double Omega, double phi, double t,
                      const CascadeOptions& opt, int k_override) {
  const Drive dr = drive_of(params, delta, Omega, phi);
  if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("cascade: t must be finite and >= 0");
  int k = copy_count(t, dr.T);
  if (k_override > 0) {
    if (k_override < k) throw ConfigError("cascade: forced copy count below ceil(t/T)");
    k = k_override;
  }
  if (k > opt.max_k)
    throw CapacityError("cascade: t = " + std::to_string(t) + " needs " + std::to_string(k) +
                        " copies, above max_k = " + std::to_string(opt.max_k));
  return make_chain(dr, k, t);
}

SuperPropagator propagate(const ChainSpec& chain, const CascadeOptions& opt) {
  if (opt.steps_per_T <= 0) throw ConfigError("cascade: steps_per_T must be positive");
  const double T = chain.delay_T;
  const double h = T / opt.steps_per_T;
  std::vector<double> cuts{0.0, T};
  for (int l = 1; l <= chain.k; ++l) cuts.push_back(chain.switch_time(l));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  SuperPropagator out;
  out.k = chain.k;
  out.t = chain.t;
  out.E = MatrixXcd::Identity(pow4(chain.k), pow4(chain.k));
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const int m = chain.active_at(0.5 * (a + b));
    if (m == 0) continue;
    evolve(chain_generator(chain, m), out.E, b - a, h);
  }
  return out;
}

double ReducedState::min_eigenvalue() const {
  const Mat2 herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat2> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

ReducedState reduced_state(const SuperPropagator& prop, const Mat2& initial) {
  check_initial(initial);
  const int k = prop.k;
  const long N = pow4(k), NB = pow4(k - 1);
  if (prop.E.rows() != N || prop.E.cols() != N) throw ConfigError("reduced_state: propagator size mismatch");
  // R[out_1..out_k ; in_2..in_k] with rho0 inserted on copy 1's input
  MatrixXcd R = MatrixXcd::Zero(N, NB);
  for (int cd = 0; cd < 4; ++cd) R += initial(cd / 2, cd % 2) * prop.E.middleCols(cd * NB, NB);
  // (S2,S1) first: copy l's output digit is closed against copy l+1's input digit
  for (int l = 1; l < k; ++l) {
    const Eigen::Index rows = R.rows() / 4, cols = R.cols() / 4;
    MatrixXcd next = MatrixXcd::Zero(rows, cols);
    for (int z = 0; z < 4; ++z) next += R.block(z * rows, z * cols, rows, cols);
    R.swap(next);
  }
  ReducedState rs;
  rs.t = prop.t;
  rs.rho << R(0, 0), R(1, 0), R(2, 0), R(3, 0);
  const double drift = std::abs(rs.rho.trace() - initial.trace());
  if (drift > 1e-6)
    throw ConsistencyError("reduced_state: trace drifted by " + std::to_string(drift) + "; propagation inaccurate");
  return rs;
}

OutputObservables output_observables(const ChainSpec& chain, const Mat2& initial, const CascadeOptions& opt) {
  check_initial(initial);
  const int K = chain.k;
  if (K != copy_count(chain.t, chain.delay_T))
    throw ConfigError("output_observables: chain must use the natural copy count ceil(t/T)");
  const Drive dr{chain.gamma, chain.delay_T, chain.delta, chain.Omega, chain.phi, chain.phase};
  const double T = chain.delay_T, h = T / opt.steps_per_T;
  const double tau = chain.switch_time(K);
  MatrixXcd V = input_bundle(initial, K);
  evolve(chain_generator(chain, K), V, tau, h);
  MatrixXcd Q = MatrixXcd::Identity(1, 1);
  if (K > 1) {
    const ChainSpec prev = make_chain(dr, K - 1, chain.t);
    Q = MatrixXcd::Identity(pow4(K - 1), pow4(K - 1));
    evolve(chain_generator(prev, K - 1), Q, T - tau, h);
  }
  return window_observables(Q, V, K, dr, chain.t);
}

std::vector<OutputObservables> cascade_trajectory(const SystemParams& params, double delta, double Omega,
                                                  double phi, const Mat2& initial, double t_max,
                                                  int samples_per_T, const CascadeOptions& opt) {
  const Drive dr = drive_of(params, delta, Omega, phi);
  check_initial(initial);
  if (samples_per_T <= 0 || opt.steps_per_T <= 0 || opt.steps_per_T % samples_per_T != 0)
    throw ConfigError("cascade_trajectory: samples_per_T must divide steps_per_T");
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw ConfigError("cascade_trajectory: t_max must be >= 0");
  const double T = dr.T, h = T / opt.steps_per_T;
  const long block = opt.steps_per_T / samples_per_T;
  const int M = samples_per_T;
  const int K_max = copy_count(t_max, T);
  if (K_max > opt.max_k)
    throw CapacityError("cascade_trajectory: t_max needs " + std::to_string(K_max) + " copies, above max_k = " +
                        std::to_string(opt.max_k));
  const double t_end = t_max * (1.0 + 1e-12);

  std::vector<OutputObservables> out;
  for (int K = 1; K <= K_max; ++K) {
    const ChainSpec chain = make_chain(dr, K, K * T);
    const SpMat A = chain_generator(chain, K);
    MatrixXcd D = MatrixXcd::Identity(A.rows(), A.rows());
    rk4_apply(A, D, h, block);

    std::vector<MatrixXcd> Qs(M + 1);
    Qs[0] = MatrixXcd::Identity(pow4(K - 1), pow4(K - 1));
    if (K > 1) {
      const ChainSpec prev = make_chain(dr, K - 1, (K - 1) * T);
      const SpMat B = chain_generator(prev, K - 1);
      MatrixXcd DB = MatrixXcd::Identity(B.rows(), B.rows());
      rk4_apply(B, DB, h, block);
      for (int m = 1; m <= M; ++m) Qs[m] = DB * Qs[m - 1];
    }

    MatrixXcd V = input_bundle(initial, K);
    for (int j = (K == 1 ? 0 : 1); j <= M; ++j) {
      const double t = (K - 1) * T + j * T / M;
      if (t > t_end) break;
      if (j > 0) V = (D * V).eval();
      if (!V.allFinite()) throw IntegrationError("cascade_trajectory: non-finite state");
      out.push_back(window_observables(Qs[M - j], V, K, dr, t));
    }
  }
  return out;
}

double delayed_g2(const SystemParams& params, double delta, double Omega, double phi, const Mat2& initial,
                  double t0, double tau, const CascadeOptions& opt) {
  const Drive dr = drive_of(params, delta, Omega, phi);
  check_initial(initial);
  const double t1 = t0, t2 = t0 + tau;
  if (!(t1 >= 0.0) || !(t2 >= 0.0) || !std::isfinite(t1) || !std::isfinite(t2))
    throw ConfigError("delayed_g2: t0 and t0 + tau must be finite and >= 0");
  const double T = dr.T, h = T / opt.steps_per_T;
  const double late = std::max(t1, t2);
  const int K = copy_count(late, T);
  if (K > opt.max_k) throw CapacityError("delayed_g2: needs " + std::to_string(K) + " copies, above max_k");
  const ChainSpec chain = make_chain(dr, K, late);

  struct Event {
    double s, t;
    int link;
  };
  std::vector<Event> ev;
  for (double ti : {std::min(t1, t2), late}) {
    const int k = copy_count(ti, T);
    ev.push_back({std::clamp(ti - (k - 1) * T, 0.0, T), ti, k - 1});
  }
  std::stable_sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.s < b.s; });
  const double s_sw = chain.switch_time(K);

  const SpMat A_on = chain_generator(chain, K);
  const SpMat A_off = chain_generator(chain, K - 1);
  MatrixXcd V = input_bundle(initial, K);
  double s = 0.0;
  auto advance = [&](double to) {
    if (to < s) throw ConsistencyError("delayed_g2: negative auxiliary interval (ordering error)");
    if (s < s_sw) {
      const double mid = std::min(to, s_sw);
      evolve(A_on, V, mid - s, h);
      s = mid;
    }
    if (to > s) {
      evolve(A_off, V, to - s, h);
      s = to;
    }
  };
  for (const Event& e : ev) {
    advance(e.s);
    V = (jump_super(chain.L_link[e.link], K) * V).eval();
  }
  advance(T);
  cplx tr = 0.0;
  for (long x = 0; x < pow4(K - 1); ++x)
    for (int a = 0; a < 2; ++a) tr += V(4 * x + 3 * a, x);
  return 0.25 * tr.real();
}

std::vector<double> delayed_g2_from_zero(const SystemParams& params, double delta, double Omega, double phi,
                                         const Mat2& initial, double tau_max, int samples_per_T,
                                         const CascadeOptions& opt) {
  const Drive dr = drive_of(params, delta, Omega, phi);
  check_initial(initial);
  // the first jump acts at s = 0 on copy 1 only, so it can be folded into the initial state
  const Mat2 L01 = std::sqrt(dr.gamma) * std::conj(dr.phase.e) * sigma_minus();
  const Mat2 after = L01 * initial * L01.adjoint();
  const auto traj = cascade_trajectory(params, delta, Omega, phi, after, tau_max, samples_per_T, opt);
  std::vector<double> g;
  g.reserve(traj.size());
  for (const auto& o : traj) g.push_back(0.5 * o.n_out);
  return g;
}

double markov_benchmark(const SystemParams& params, double Omega, double t) {
  params.validate();
  if (!(Omega >= 0.0) || !std::isfinite(Omega)) throw ConfigError("markov_benchmark: Omega must be >= 0");
  if (!(t >= 0.0)) throw ConfigError("markov_benchmark: t must be >= 0");
  if (t >= params.delay_T) throw DomainError("markov_benchmark: valid only for t < T");
  const double g = params.gamma;
  const cplx zeta = std::sqrt(cplx(0.25 * g * g - Omega * Omega, 0.0));
  const cplx zt = zeta * t;
  // sinh(zeta t) / zeta without the 0/0 at zeta = 0
  const cplx shc = std::abs(zt) < 1e-6 ? t * (1.0 + zt * zt / 6.0) : std::sinh(zt) / zeta;
  const cplx bracket = std::cosh(zt) + 1.5 * g * shc;
  const double pref = Omega * Omega / (4.0 * g * g + 2.0 * Omega * Omega);
  return pref * (1.0 - std::exp(-1.5 * g * t) * bracket.real());
}

}  // namespace giant_atom
