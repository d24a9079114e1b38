#pragma once

// Deterministic adaptive quadrature for the integral shapes that appear in the
// covariance formulas: finite intervals with algebraic endpoint singularities,
// half-lines with algebraic or exponential decay, oscillatory Fourier-type
// integrals, and iterated two-dimensional integrals.
//
// All routines use a nested 10/21-point Gauss-Kronrod pair with global
// adaptive bisection. Singular endpoints are graded by a power substitution
// driven by the caller-declared exponent, so that f(x) ~ (x-a)^p becomes
// bounded and smooth in the new variable.

#include <string>
#include <vector>

#include "ssgp/function_ref.hpp"

namespace ssgp {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdivisions = 2000;
  /// Upper truncation point for exponentially decaying half-line integrals.
  /// 0 selects the tail-bound rule: truncate where exp(-rate x) < 1e-22.
  double tail_cut = 0.0;
  /// Throw AccuracyError when the tolerance is not met.
  bool strict = true;

  void validate() const;
  QuadratureSpec tightened(double factor) const;

  static QuadratureSpec one_dimensional() { return {}; }
  static QuadratureSpec oscillatory() { return {1e-8, 1e-7, 2000, 0.0, true}; }
  static QuadratureSpec two_dimensional() { return {1e-8, 1e-7, 2000, 0.0, true}; }
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
  bool converged = true;

  QuadResult& operator+=(const QuadResult& o) {
    value += o.value;
    error += o.error;
    evaluations += o.evaluations;
    converged = converged && o.converged;
    return *this;
  }
};

/// Declared algebraic behaviour f(x) ~ |x - endpoint|^exponent at each end.
/// An exponent of 0 means "regular"; exponents must exceed -1.
struct Endpoints {
  double left = 0.0;
  double right = 0.0;
};

/// Declared decay of a half-line integrand at infinity.
struct Decay {
  enum class Kind { exponential, power };
  Kind kind = Kind::power;
  /// exponential: f ~ exp(-rate x); power: |f| <= C x^(-rate) with rate > 1.
  double rate = 2.0;

  static Decay exponential(double rate) { return {Kind::exponential, rate}; }
  static Decay power(double rate) { return {Kind::power, rate}; }
};

using Integrand = FunctionRef<double(double)>;

QuadResult integrate_finite(Integrand f, double a, double b, const QuadratureSpec& spec,
                            Endpoints ends = {});

/// Integral over (0, inf). `origin_exponent` declares f(y) ~ y^p near 0; `scale`
/// is the split point between the graded head (0, scale] and the tail.
QuadResult integrate_semi_infinite(Integrand f, double origin_exponent, Decay decay,
                                   const QuadratureSpec& spec, double scale = 1.0);

enum class Trig { cos, sin };

struct OscillatoryOptions {
  double origin_exponent = 0.0;
  /// The envelope is of one sign and monotone beyond this point.
  double monotone_from = 1.0;
  /// Integrate envelope(x) (cos(w x) - 1) instead of envelope(x) cos(w x).
  bool compensate = false;
  /// Power decay rate of the envelope, used for the compensated tail.
  double envelope_decay = 2.0;
  int max_half_periods = 600;
};

/// int_0^inf envelope(x) trig(frequency x) dx by half-period partition with
/// Wynn epsilon acceleration of the alternating partial sums.
QuadResult integrate_oscillatory(Integrand envelope, double frequency, Trig trig,
                                 const QuadratureSpec& spec, OscillatoryOptions opts = {});

struct Breakpoint {
  double x = 0.0;
  double exponent = 0.0;  // singular exponent on both sides of x
};

/// One axis of an iterated integral: [lo, hi] (hi may be +inf) with declared
/// endpoint exponents, interior breakpoints and tail decay.
struct AxisSpec {
  double lo = 0.0;
  double hi = 1.0;
  Endpoints ends{};
  std::vector<Breakpoint> breaks{};
  Decay decay = Decay::power(2.0);
  std::string name = "axis";
};

QuadResult integrate_axis(Integrand f, const AxisSpec& axis, const QuadratureSpec& spec);

using Integrand2D = FunctionRef<double(double, double)>;
using InnerAxis = FunctionRef<AxisSpec(double)>;

/// int_outer dv int_inner(v) du f(u, v). The inner integral is resolved to a
/// tolerance one decade tighter than the outer.
QuadResult integrate_2d_iterated(Integrand2D f, InnerAxis inner, const AxisSpec& outer,
                                 const QuadratureSpec& spec);

/// Wynn epsilon extrapolation of a sequence of partial sums.
double wynn_epsilon(const std::vector<double>& partial_sums);

}  // namespace ssgp
