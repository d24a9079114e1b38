#include "ssgp/analytic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ssgp/errors.hpp"

namespace ssgp {

using std::numbers::pi;

ModelParams ModelParams::make(double hurst, double gamma) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    std::ostringstream os;
    os << "Hurst parameter must lie in (0,1), got " << hurst;
    throw DomainError(os.str());
  }
  if (!(gamma > 0.0 && gamma < 2.0 * hurst)) {
    std::ostringstream os;
    os << "gamma must lie in (0, 2H) = (0, " << 2.0 * hurst << "), got " << gamma;
    throw DomainError(os.str());
  }
  ModelParams p;
  p.hurst = hurst;
  p.gamma = gamma;
  p.alpha = 2.0 * hurst - gamma;
  return p;
}

double gamma_fn(double x) { return std::tgamma(x); }

double mellin_lorentz(double p) {
  if (!(p > 0.0 && p < 2.0)) throw DomainError("mellin_lorentz: exponent must lie in (0,2)");
  return pi / (2.0 * std::sin(0.5 * pi * p));
}

double kappa_paper(double gamma) {
  if (!(gamma > 0.0 && gamma < 2.0)) throw DomainError("kappa_paper: gamma must lie in (0,2)");
  return mellin_lorentz(gamma) / gamma_fn(gamma);
}

double fbm_spectral_constant_sq(double h) {
  return 2.0 * pi / (gamma_fn(2.0 * h + 1.0) * std::sin(pi * h));
}

ModelConstants constants_for(const ModelParams& params) {
  const double H = params.hurst;
  const double g = params.gamma;
  const double a = params.alpha;
  ModelConstants c;
  c.c1 = mellin_lorentz(g);
  c.c2 = mellin_lorentz(2.0 - 2.0 * H);
  c.kappa_paper = c.c1 / gamma_fn(g);
  c.c_H_sq = fbm_spectral_constant_sq(H);
  // W has the spectral representation of fBm with index alpha/2 but carries
  // the normalization of index H, hence the ratio of the two C^2 constants.
  c.kappa_star = c.c1 * fbm_spectral_constant_sq(0.5 * a) / (gamma_fn(g) * c.c_H_sq);
  c.spectral_prefactor = 2.0 / (gamma_fn(g) * c.c_H_sq);
  c.y_const = c.c2 * c.spectral_prefactor;
  c.lambda1_paper =
      4.0 * pi * c.c2 / (gamma_fn(g) * gamma_fn(2.0 * H + 1.0) * std::sin(pi * H));
  return c;
}

double hermite_poly(int q, double x) {
  if (q < 0) throw DomainError("hermite_poly: order must be nonnegative");
  if (q == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < q; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

// 2 m^e sum_{k>=1} c_k m^(-2k) with c_k = binom(e, 2k) / divisor_at_1, where the
// factor (e-1) is dropped from every binomial when drop_em1 is set.
double second_difference_series(double e, double m, bool drop_em1) {
  const double inv2 = 1.0 / (m * m);
  double coef = 1.0;  // running e(e-1)...(e-2k+1)/(2k)!
  double term_pow = 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 30; ++k) {
    const int i0 = 2 * k - 2;
    const int i1 = 2 * k - 1;
    const double f0 = e - i0;
    const double f1 = (drop_em1 && i1 == 1) ? 1.0 : e - i1;
    coef *= f0 * f1 / ((2.0 * k - 1.0) * (2.0 * k));
    term_pow *= inv2;
    const double term = coef * term_pow;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return 2.0 * std::pow(m, e) * sum;
}

double expm1_ratio(double x) { return std::abs(x) < 1e-8 ? 1.0 + 0.5 * x : std::expm1(x) / x; }

}  // namespace

double power_second_difference(double e, double m) {
  m = std::abs(m);
  if (m >= 8.0) return second_difference_series(e, m, false);
  const double lo = std::abs(m - 1.0);
  return std::pow(m + 1.0, e) - 2.0 * std::pow(m, e) + std::pow(lo, e);
}

double power_excess_over_em1(double e, double x) {
  if (x <= 0.0) return 0.0;
  const double d = e - 1.0;
  const double lx = std::log(x);
  return x * lx * expm1_ratio(d * lx);
}

double power_second_difference_over_em1(double e, double m) {
  m = std::abs(m);
  if (m >= 8.0) return second_difference_series(e, m, true);
  const double d = e - 1.0;
  if (std::abs(d) > 0.25) return power_second_difference(e, m) / d;
  // linear parts cancel in the second difference
  return power_excess_over_em1(e, m + 1.0) - 2.0 * power_excess_over_em1(e, m) +
         power_excess_over_em1(e, std::abs(m - 1.0));
}

}  // namespace ssgp
