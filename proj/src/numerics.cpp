#include "giant_atom/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "giant_atom/errors.hpp"

namespace giant_atom {

namespace {

constexpr double kInvE = 0.36787944117144233;
constexpr int kMaxHalley = 100;

// Halley on w - z e^{-w} = 0, the e^w-free form of w e^w = z.
bool halley(cplx z, cplx& w) {
  for (int it = 0; it < kMaxHalley; ++it) {
    const cplx r = w - z * std::exp(-w);
    const cplx wp1 = w + 1.0;
    if (std::abs(wp1) < 1e-300) return false;
    const cplx dw = r / (wp1 - (w + 2.0) * r / (2.0 * wp1));
    if (!std::isfinite(dw.real()) || !std::isfinite(dw.imag())) return false;
    w -= dw;
    if (std::abs(dw) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(w))) {
      return true;
    }
  }
  return false;
}

bool on_branch(int k, cplx z, cplx w) {
  if (z.imag() == 0.0 && z.real() < 0.0 && z.real() >= -kInvE) {
    // both W_0 and W_{-1} are real here; they are split by w = -1
    if (k == 0) return w.real() >= -1.0 - 1e-7 && std::abs(w.imag()) < 1e-7;
    if (k == -1) return w.real() <= -1.0 + 1e-7 && std::abs(w.imag()) < 1e-7;
  }
  const double wind = (w + std::log(w) - std::log(z)).imag() / (2.0 * kPi);
  return std::lround(wind) == k;
}

double residual(cplx z, cplx w) { return std::abs(w * std::exp(w) - z) / std::max(std::abs(z), 1.0); }

}  // namespace

cplx lambert_w(int k, cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("lambert_w: non-finite argument");
  }
  // a signed zero imaginary part must not flip sides of the cut
  if (z.imag() == 0.0) z = cplx(z.real(), 0.0);
  if (z == cplx(0.0, 0.0)) {
    if (k == 0) return 0.0;
    throw DomainError("lambert_w: z = 0 is singular on branch " + std::to_string(k));
  }
  if (k == 0 && std::abs(z + kInvE) < 1e-300) return -1.0;
  if (k == -1 && z == cplx(-kInvE, 0.0)) return -1.0;

  std::vector<cplx> seeds;
  const cplx L1 = std::log(z) + cplx(0.0, 2.0 * kPi * k);
  const cplx bp = z + kInvE;
  if (std::abs(bp) < 1.0) {
    const cplx p = std::sqrt(2.0 * (std::exp(1.0) * z + 1.0));
    const bool upper = z.imag() >= 0.0;
    double sign = 0.0;
    if (k == 0) sign = 1.0;
    if ((k == -1 && upper) || (k == 1 && !upper)) sign = -1.0;
    if (sign != 0.0) {
      const cplx q = sign * p;
      seeds.push_back(-1.0 + q - q * q / 3.0 + 11.0 / 72.0 * q * q * q);
    }
  }
  if (k == 0 && std::abs(z) < 0.5) {
    seeds.push_back(z * (1.0 - z * (1.0 - z * (1.5 - z * 8.0 / 3.0))));
  }
  if (std::abs(L1) > 1e-3) {
    const cplx L2 = std::log(L1);
    seeds.push_back(L1 - L2 + L2 / L1);
  }
  if (k == 0) {
    const cplx l = std::log(1.0 + z);
    seeds.push_back(l * (1.0 - std::log(1.0 + l) / (2.0 + l)));
    seeds.push_back(cplx(0.5, 0.0));
  }

  cplx last = seeds.empty() ? cplx(0.0, 0.0) : seeds.front();
  for (cplx w : seeds) {
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
    const bool ok = halley(z, w);
    last = w;
    if (ok && residual(z, w) <= 1e-12 && on_branch(k, z, w)) return w;
  }
  throw IterationFailure("lambert_w: no convergence on branch " + std::to_string(k), last);
}

std::size_t DelayHistory::steps_per_delay() const {
  return static_cast<std::size_t>(std::llround(delay / grid_step));
}

cplx DelayHistory::interval_value(std::size_t n, double theta) const {
  const double t2 = theta * theta;
  const double t3 = t2 * theta;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + theta;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * samples[n] + h01 * samples[n + 1] +
         grid_step * (h10 * slope_left[n] + h11 * slope_right[n]);
}

cplx DelayHistory::value_at(double t) const {
  if (t < 0.0) return 0.0;
  if (samples.empty()) throw RangeError("DelayHistory: empty trace");
  const double end = horizon();
  if (t > end * (1.0 + 1e-12) + 1e-300) {
    throw RangeError("DelayHistory: t=" + std::to_string(t) + " beyond horizon " + std::to_string(end));
  }
  if (samples.size() == 1) return samples[0];
  const double x = t / grid_step;
  auto n = static_cast<std::size_t>(std::floor(x));
  if (n >= samples.size() - 1) n = samples.size() - 2;
  const double theta = std::clamp(x - static_cast<double>(n), 0.0, 1.0);
  if (theta == 0.0) return samples[n];
  if (theta == 1.0) return samples[n + 1];
  return interval_value(n, theta);
}

DelayHistory integrate_delay_ode(const DelayRhs& rhs, double delay, double step, double horizon,
                                 cplx initial, const DriveFunction& drive) {
  if (!(step > 0.0) || !(delay > 0.0)) throw ConfigError("integrate_delay_ode: step and delay must be positive");
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw ConfigError("integrate_delay_ode: bad horizon");
  const double ratio = delay / step;
  const long long N = std::llround(ratio);
  if (N < 1 || std::abs(ratio - static_cast<double>(N)) > 1e-9 * static_cast<double>(N)) {
    throw ConfigError("integrate_delay_ode: step does not divide the delay");
  }
  const double h = delay / static_cast<double>(N);
  const auto M = static_cast<std::size_t>(std::ceil(horizon / h - 1e-9));

  DelayHistory out;
  out.grid_step = h;
  out.delay = delay;
  out.samples.resize(M + 1);
  out.slope_left.resize(M);
  out.slope_right.resize(M);
  out.samples[0] = initial;

  auto d = [&](double s) -> cplx { return (drive && s >= 0.0) ? drive(s) : cplx(0.0, 0.0); };

  cplx d0 = d(0.0);
  for (std::size_t j = 0; j < M; ++j) {
    const double t = h * static_cast<double>(j);
    const double tm = t + 0.5 * h;
    const double t1 = h * static_cast<double>(j + 1);
    cplx yd0 = 0.0, ydm = 0.0, yd1 = 0.0, dd0 = 0.0, ddm = 0.0, dd1 = 0.0;
    const long long back = static_cast<long long>(j) - N;
    if (back >= 0) {
      const auto b = static_cast<std::size_t>(back);
      yd0 = out.samples[b];
      ydm = out.interval_value(b, 0.5);
      yd1 = out.samples[b + 1];
      dd0 = d(t - delay);
      ddm = d(tm - delay);
      dd1 = d(t1 - delay);
    }
    const cplx dm = d(tm);
    const cplx d1 = d(t1);
    const cplx y = out.samples[j];
    const cplx k1 = rhs(t, y, yd0, d0, dd0);
    const cplx k2 = rhs(tm, y + 0.5 * h * k1, ydm, dm, ddm);
    const cplx k3 = rhs(tm, y + 0.5 * h * k2, ydm, dm, ddm);
    const cplx k4 = rhs(t1, y + h * k3, yd1, d1, dd1);
    const cplx y1 = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(y1.real()) || !std::isfinite(y1.imag())) {
      throw IntegrationError("integrate_delay_ode: non-finite value at t=" + std::to_string(t1));
    }
    out.samples[j + 1] = y1;
    out.slope_left[j] = k1;
    out.slope_right[j] = rhs(t1, y1, yd1, d1, dd1);
    d0 = d1;
  }
  return out;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                          double abs_tol, const std::vector<double>& breakpoints) {
  if (a == b) return 0.0;
  if (std::isnan(a) || std::isnan(b)) throw ConfigError("integrate_adaptive: NaN limit");
  if (a > b) return -integrate_adaptive(f, b, a, rel_tol, abs_tol, breakpoints);

  // infinite ends are mapped onto finite ones: x = c + u/(1-u) or c - u/(1-u)
  if (std::isinf(a) && std::isinf(b)) {
    double c = 0.0;
    for (double x : breakpoints) {
      if (std::isfinite(x)) {
        c = x;
        break;
      }
    }
    return integrate_adaptive(f, a, c, rel_tol, abs_tol, breakpoints) +
           integrate_adaptive(f, c, b, rel_tol, abs_tol, breakpoints);
  }
  if (std::isinf(b) || std::isinf(a)) {
    const bool up = std::isinf(b);
    const double c = up ? a : b;
    const double s = up ? 1.0 : -1.0;
    auto g = [&](double u) {
      if (u >= 1.0) return 0.0;
      const double v = 1.0 - u;
      return f(c + s * u / v) / (v * v);
    };
    std::vector<double> mapped;
    for (double x : breakpoints) {
      const double d = s * (x - c);
      if (d > 0.0 && std::isfinite(d)) mapped.push_back(d / (1.0 + d));
    }
    return integrate_adaptive(g, 0.0, 1.0, rel_tol, abs_tol, mapped);
  }

  std::vector<double> cuts{a};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.push_back(b);

  // globally adaptive: always bisect the piece with the largest error estimate
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  struct Piece {
    double lo, hi, value, err, l1;
    bool operator<(const Piece& o) const { return err < o.err; }
  };
  auto rule = [&](double lo, double hi) {
    double e = 0.0, l1 = 0.0;
    const double v = GK::integrate(f, lo, hi, 0, 0.0, &e, &l1);
    // |K - G| is mostly the Gauss error; QUADPACK-style damping, with the piece L1 as scale
    if (l1 > 0.0) e = std::min(e, l1 * std::pow(std::min(1.0, 200.0 * e / l1), 1.5));
    return Piece{lo, hi, v, e, l1};
  };
  std::priority_queue<Piece> heap;
  double sum = 0.0, err = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i] == cuts[i + 1]) continue;
    const Piece p = rule(cuts[i], cuts[i + 1]);
    sum += p.value;
    err += p.err;
    l1 += p.l1;
    heap.push(p);
  }
  // below ~100 eps of the L1 norm the estimate is rounding noise
  auto target = [&] {
    return std::max({abs_tol, rel_tol * std::abs(sum), 100.0 * std::numeric_limits<double>::epsilon() * l1});
  };
  constexpr int kMaxPieces = 20000;
  while (err > target() && static_cast<int>(heap.size()) < kMaxPieces) {
    const Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      heap.push(Piece{worst.lo, worst.hi, worst.value, 0.0, worst.l1});
      continue;
    }
    const Piece l = rule(worst.lo, mid);
    const Piece r = rule(mid, worst.hi);
    sum += l.value + r.value - worst.value;
    err += l.err + r.err - worst.err;
    l1 += l.l1 + r.l1 - worst.l1;
    heap.push(l);
    heap.push(r);
  }
  // the running sums drift; recompute them once at the end
  sum = 0.0;
  err = 0.0;
  for (; !heap.empty(); heap.pop()) {
    sum += heap.top().value;
    err += heap.top().err;
  }
  if (!std::isfinite(sum)) throw IntegrationError("integrate_adaptive: non-finite result");
  if (err > 4.0 * target()) {
    throw IntegrationError("integrate_adaptive: error estimate " + std::to_string(err / std::max(std::abs(sum), 1e-300)) + " (relative) above tolerance after " + std::to_string(kMaxPieces) + " pieces");
  }
  return sum;
}

double simpson(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  const std::size_t m = (n % 2 == 1) ? n : n - 1;
  double s = 0.0;
  if (m >= 3) {
    s = y[0] + y[m - 1];
    for (std::size_t i = 1; i + 1 < m; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * y[i];
    s *= h / 3.0;
  }
  if (m != n) s += 0.5 * h * (y[n - 2] + y[n - 1]);
  return s;
}

}  // namespace giant_atom
