#include "ssgp/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

#include "ssgp/errors.hpp"

namespace ssgp {

namespace {

// Kronrod abscissae/weights of the 21-point rule; odd-indexed abscissae carry
// the embedded 10-point Gauss rule (QUADPACK qk21).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525086006, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk21(Integrand f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = 0.0;
  double resk = fc * kWgk[10];
  double resabs = std::abs(resk);
  std::array<double, 10> f1{}, f2{};
  for (int j = 0; j < 5; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double v1 = f(center - dx);
    const double v2 = f(center + dx);
    f1[jtw] = v1;
    f2[jtw] = v2;
    resg += kWg[j] * (v1 + v2);
    resk += kWgk[jtw] * (v1 + v2);
    resabs += kWgk[jtw] * (std::abs(v1) + std::abs(v2));
  }
  for (int j = 0; j < 5; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double v1 = f(center - dx);
    const double v2 = f(center + dx);
    f1[jtwm1] = v1;
    f2[jtwm1] = v2;
    resk += kWgk[jtwm1] * (v1 + v2);
    resabs += kWgk[jtwm1] * (std::abs(v1) + std::abs(v2));
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (std::abs(f1[j] - reskh) + std::abs(f2[j] - reskh));
  }
  const double ah = std::abs(half);
  const double result = resk * half;
  resabs *= ah;
  resasc *= ah;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * resabs, err);
  }
  if (!std::isfinite(result)) err = std::numeric_limits<double>::infinity();
  return {a, b, result, err};
}

double tolerance(const QuadratureSpec& spec, double value) {
  return std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
}

QuadResult adapt(Integrand f, double a, double b, const QuadratureSpec& spec, bool allow_throw) {
  std::priority_queue<Panel> heap;
  Panel first = gk21(f, a, b);
  double total = first.value;
  double err = first.error;
  long evals = 21;
  heap.push(first);
  int splits = 0;
  // below this the estimate is dominated by rounding in the panel sums
  auto floor_tol = [&] {
    return std::max(tolerance(spec, total), 1e3 * std::numeric_limits<double>::epsilon() * std::abs(total));
  };
  while (err > floor_tol() && splits < spec.max_subdivisions) {
    Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        std::abs(worst.b - worst.a) < 1e-14 * std::max(std::abs(worst.a), std::abs(worst.b))) {
      break;  // panel at floating-point resolution
    }
    heap.pop();
    const Panel left = gk21(f, worst.a, mid);
    const Panel right = gk21(f, mid, worst.b);
    evals += 42;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
    if (splits % 64 == 0) {
      // refresh the running sums to limit cancellation drift
      std::priority_queue<Panel> copy = heap;
      double t = 0.0, e = 0.0;
      while (!copy.empty()) {
        t += copy.top().value;
        e += copy.top().error;
        copy.pop();
      }
      total = t;
      err = e;
    }
  }
  QuadResult r{total, err, evals, err <= floor_tol()};
  if (!r.converged && spec.strict && allow_throw) {
    std::ostringstream os;
    os << "quadrature on [" << a << ", " << b << "] did not converge: estimate " << total
       << ", error " << err << " after " << splits << " subdivisions";
    throw AccuracyError(os.str(), total, err);
  }
  return r;
}

double grading_power(double exponent) {
  // (x-a)^p dx with x - a = L tau^m becomes tau^(m(p+1)-1); m = 2/(p+1) makes it ~ tau.
  return std::clamp(2.0 / (exponent + 1.0), 1.0, 64.0);
}

void check_exponent(double p) {
  if (!(p > -1.0)) throw DomainError("declared endpoint exponent must exceed -1");
}

QuadResult graded_piece(Integrand f, double a, double b, const QuadratureSpec& spec, double p,
                        bool at_left) {
  if (p == 0.0 || p >= 1.0) return adapt(f, a, b, spec, true);
  const double m = grading_power(p);
  const double len = b - a;
  auto g = [&](double tau) {
    const double tm1 = std::pow(tau, m - 1.0);
    const double x = at_left ? a + len * tau * tm1 : b - len * tau * tm1;
    if (x == (at_left ? a : b)) return 0.0;  // substitution underflowed onto the endpoint
    // near the endpoint f may overflow while the Jacobian vanishes faster
    const double v = f(x) * len * m * tm1;
    return std::isfinite(v) ? v : 0.0;
  };
  return adapt(g, 0.0, 1.0, spec, true);
}

void check_spec(const QuadratureSpec& spec) { spec.validate(); }

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("quadrature tolerances must be > 0");
  if (max_subdivisions < 1) throw DomainError("max_subdivisions must be >= 1");
  if (tail_cut < 0.0) throw DomainError("tail_cut must be >= 0 (0 selects the tail rule)");
}

QuadratureSpec QuadratureSpec::tightened(double factor) const {
  QuadratureSpec s = *this;
  s.abs_tol /= factor;
  s.rel_tol /= factor;
  return s;
}

QuadResult integrate_finite(Integrand f, double a, double b, const QuadratureSpec& spec,
                            Endpoints ends) {
  check_spec(spec);
  if (!(a < b)) throw DomainError("integrate_finite requires a < b");
  check_exponent(ends.left);
  check_exponent(ends.right);
  const bool sl = ends.left != 0.0 && ends.left < 1.0;
  const bool sr = ends.right != 0.0 && ends.right < 1.0;
  if (sl && sr) {
    const double mid = 0.5 * (a + b);
    const QuadratureSpec half = spec.tightened(2.0);
    QuadResult r = graded_piece(f, a, mid, half, ends.left, true);
    r += graded_piece(f, mid, b, half, ends.right, false);
    return r;
  }
  if (sl) return graded_piece(f, a, b, spec, ends.left, true);
  if (sr) return graded_piece(f, a, b, spec, ends.right, false);
  return adapt(f, a, b, spec, true);
}

namespace {

QuadResult tail_integral(Integrand f, double c, Decay decay, const QuadratureSpec& spec) {
  if (decay.kind == Decay::Kind::exponential) {
    if (!(decay.rate > 0.0)) throw DomainError("exponential decay rate must be > 0");
    const double cut = std::max(spec.tail_cut, c + 50.0 / decay.rate);
    if (cut <= c) return {};
    // geometric split so that adaptivity sees the decay scale
    QuadResult r;
    double lo = c;
    const QuadratureSpec piece = spec.tightened(4.0);
    while (lo < cut) {
      const double hi = std::min(cut, lo + std::max(c, 10.0 / decay.rate));
      r += integrate_finite(f, lo, hi, piece);
      lo = hi;
    }
    return r;
  }
  if (!(decay.rate > 1.0)) {
    std::ostringstream os;
    os << "tail decays like x^-" << decay.rate << ", which is not integrable";
    throw AccuracyError(os.str(), std::numeric_limits<double>::quiet_NaN(),
                        std::numeric_limits<double>::infinity());
  }
  // x = c tau^-m maps [c, inf) onto (0, 1]; x^-p dx becomes ~ tau^(m(p-1)-1).
  const double m = std::clamp(2.0 / (decay.rate - 1.0), 1.0, 16.0);
  auto g = [&](double tau) {
    const double x = c * std::pow(tau, -m);
    if (!std::isfinite(x)) return 0.0;
    const double v = f(x) * c * m * std::pow(tau, -m - 1.0);
    return std::isfinite(v) ? v : 0.0;
  };
  return adapt(g, 0.0, 1.0, spec, true);
}

}  // namespace

QuadResult integrate_semi_infinite(Integrand f, double origin_exponent, Decay decay,
                                   const QuadratureSpec& spec, double scale) {
  check_spec(spec);
  check_exponent(origin_exponent);
  if (!(scale > 0.0)) throw DomainError("integrate_semi_infinite: scale must be > 0");
  const QuadratureSpec half = spec.tightened(2.0);
  QuadResult r = integrate_finite(f, 0.0, scale, half, {origin_exponent, 0.0});
  r += tail_integral(f, scale, decay, half);
  if (!r.converged && spec.strict) {
    throw AccuracyError("semi-infinite quadrature did not converge", r.value, r.error);
  }
  return r;
}

double wynn_epsilon(const std::vector<double>& s) {
  const std::size_t n = s.size();
  if (n < 3) return n ? s.back() : 0.0;
  std::vector<double> prev(n + 1, 0.0);  // eps_{-1}
  std::vector<double> cur(s.begin(), s.end());
  double best = s.back();
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<double> next(n - k);
    bool ok = true;
    for (std::size_t i = 0; i + k < n; ++i) {
      const double d = cur[i + 1] - cur[i];
      if (d == 0.0) {
        ok = false;
        break;
      }
      next[i] = prev[i + 1] + 1.0 / d;
    }
    if (!ok) break;
    if (k % 2 == 0) best = next.back();
    prev = std::move(cur);
    cur = std::move(next);
    if (cur.size() < 2) break;
  }
  return best;
}

QuadResult integrate_oscillatory(Integrand envelope, double w, Trig trig,
                                 const QuadratureSpec& spec, OscillatoryOptions opts) {
  using std::numbers::pi;
  check_spec(spec);
  if (!std::isfinite(w)) throw DomainError("oscillatory frequency must be finite");
  const bool negate = trig == Trig::sin && w < 0.0;
  w = std::abs(w);
  if (w == 0.0) {
    if (trig == Trig::sin || opts.compensate) return {};
    return integrate_semi_infinite(envelope, opts.origin_exponent,
                                   Decay::power(opts.envelope_decay), spec);
  }
  auto kernel = [&](double x) {
    if (trig == Trig::sin) return std::sin(w * x);
    if (opts.compensate) {
      const double s = std::sin(0.5 * w * x);
      return -2.0 * s * s;
    }
    return std::cos(w * x);
  };
  auto head_integrand = [&](double x) { return envelope(x) * kernel(x); };

  // first zero of the trig factor at or beyond monotone_from
  const double offset = trig == Trig::cos ? 0.5 : 0.0;
  const double kzero = std::max(1.0, std::ceil(opts.monotone_from * w / pi - offset));
  const double A = (kzero + offset) * pi / w;

  const QuadratureSpec piece = spec.tightened(8.0);
  QuadResult head;
  {
    // [0, A]: graded at the origin, then chunks of at most a few half-periods
    // growing geometrically so that both slow envelopes and many oscillations resolve.
    const double period_chunk = 4.0 * pi / w;
    double first = std::min(A, std::min(opts.monotone_from, period_chunk));
    head += integrate_finite(head_integrand, 0.0, first, piece, {opts.origin_exponent, 0.0});
    double lo = first;
    int chunks = 0;
    while (lo < A) {
      const double hi = std::min(A, std::min(2.0 * lo, lo + period_chunk));
      head += integrate_finite(head_integrand, lo, hi, piece);
      lo = hi;
      if (++chunks > 200000) throw AccuracyError("oscillatory head too long", head.value, head.error);
    }
  }

  // alternating tail: half-periods beyond A
  auto osc = [&](double x) {
    return envelope(x) * (trig == Trig::sin ? std::sin(w * x) : std::cos(w * x));
  };
  const double hp = pi / w;
  std::vector<double> partial;
  double sum = 0.0;
  double last_est = std::numeric_limits<double>::quiet_NaN();
  double tail_err = 0.0;
  long evals = head.evaluations;
  bool done = false;
  for (int k = 0; k < opts.max_half_periods; ++k) {
    const QuadResult t = integrate_finite(osc, A + k * hp, A + (k + 1) * hp, piece);
    sum += t.value;
    tail_err += t.error;
    evals += t.evaluations;
    partial.push_back(sum);
    if (k >= 8) {
      const std::size_t take = std::min<std::size_t>(partial.size(), 24);
      std::vector<double> window(partial.end() - static_cast<long>(take), partial.end());
      const double est = wynn_epsilon(window);
      if (std::isfinite(last_est) &&
          std::abs(est - last_est) <= 0.25 * tolerance(spec, head.value + est)) {
        last_est = est;
        done = true;
        break;
      }
      last_est = est;
    }
  }
  if (!done) {
    const double best = head.value + (std::isfinite(last_est) ? last_est : sum);
    if (spec.strict) throw AccuracyError("oscillatory tail acceleration did not converge", best, std::abs(best - head.value - sum));
    return {best, std::abs(last_est - sum), evals, false};
  }
  QuadResult r{head.value + last_est, head.error + tail_err, evals, head.converged};
  if (opts.compensate) {
    const QuadResult plain = integrate_semi_infinite([&](double y) { return envelope(A + y); }, 0.0,
                                                     Decay::power(opts.envelope_decay), piece, A);
    r.value -= plain.value;
    r.error += plain.error;
    r.evaluations += plain.evaluations;
  }
  if (negate) r.value = -r.value;
  return r;
}

QuadResult integrate_axis(Integrand f, const AxisSpec& axis, const QuadratureSpec& spec) {
  std::vector<double> pts{axis.lo};
  std::vector<double> exps{axis.ends.left};
  for (const auto& b : axis.breaks) {
    if (b.x > pts.back() && b.x < axis.hi) {
      pts.push_back(b.x);
      exps.push_back(b.exponent);
    }
  }
  const bool infinite = !std::isfinite(axis.hi);
  const std::size_t pieces = pts.size() - (infinite ? 1 : 0);
  const QuadratureSpec piece = spec.tightened(static_cast<double>(pts.size()));
  QuadResult r;
  for (std::size_t i = 0; i < pieces; ++i) {
    const double lo = pts[i];
    const double hi = i + 1 < pts.size() ? pts[i + 1] : axis.hi;
    const double right = i + 1 < pts.size() ? exps[i + 1] : axis.ends.right;
    if (hi > lo) r += integrate_finite(f, lo, hi, piece, {exps[i], right});
  }
  if (infinite) {
    const double start = pts.back();
    const double scale = start > axis.lo ? start - axis.lo : 1.0;
    auto shifted = [&](double y) { return f(start + y); };
    r += integrate_semi_infinite(shifted, exps.back(), axis.decay, piece, scale);
  }
  return r;
}

QuadResult integrate_2d_iterated(Integrand2D f, InnerAxis inner, const AxisSpec& outer,
                                 const QuadratureSpec& spec) {
  check_spec(spec);
  const QuadratureSpec inner_spec = spec.tightened(10.0);
  long evals = 0;
  double worst_inner_err = 0.0;
  auto outer_integrand = [&](double v) {
    const AxisSpec ax = inner(v);
    auto g = [&](double u) { return f(u, v); };
    QuadResult r;
    try {
      r = integrate_axis(g, ax, inner_spec);
    } catch (const AccuracyError& e) {
      std::ostringstream os;
      os << "inner axis '" << ax.name << "' failed at " << outer.name << "=" << v << ": "
         << e.what();
      throw AccuracyError(os.str(), e.best_estimate(), e.error_estimate());
    }
    evals += r.evaluations;
    worst_inner_err = std::max(worst_inner_err, r.error);
    return r.value;
  };
  QuadResult r;
  try {
    r = integrate_axis(outer_integrand, outer, spec);
  } catch (const AccuracyError& e) {
    const std::string msg = e.what();
    if (msg.rfind("inner axis", 0) == 0) throw;
    throw AccuracyError("outer axis '" + outer.name + "' failed: " + msg, e.best_estimate(),
                        e.error_estimate());
  }
  r.evaluations += evals;
  return r;
}

}  // namespace ssgp
