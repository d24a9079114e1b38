#include "ssgp/eta_transform.hpp"

#include <cmath>
#include <numbers>

#include "ssgp/analytic.hpp"
#include "ssgp/errors.hpp"

namespace ssgp {

using std::numbers::pi;

namespace {

double sinc(double x) { return std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

double expm1_ratio(double x) { return std::abs(x) < 1e-8 ? 1.0 + 0.5 * x : std::expm1(x) / x; }

void check_hurst(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("Hurst parameter must lie in (0,1)");
}

}  // namespace

double spectral_weight(double hurst, double eta) {
  return std::pow(eta, 1.0 - 2.0 * hurst) / (1.0 + eta * eta);
}

double eta_transform_oscillatory(double hurst, double z, const QuadratureSpec& spec) {
  check_hurst(hurst);
  if (z == 0.0) return 0.0;
  OscillatoryOptions opts;
  opts.origin_exponent = 1.0 - 2.0 * hurst;
  opts.compensate = true;
  opts.envelope_decay = 1.0 + 2.0 * hurst;
  opts.monotone_from = 1.0;
  auto g = [hurst](double eta) { return spectral_weight(hurst, eta); };
  return integrate_oscillatory(g, std::abs(z), Trig::cos, spec, opts).value;
}

double eta_transform_contour(double hurst, double z, const QuadratureSpec& spec) {
  check_hurst(hurst);
  z = std::abs(z);
  if (z == 0.0) return 0.0;
  const double p = 1.0 - 2.0 * hurst;
  const double ez = std::exp(-z);
  // On [0, 1/2] the two parts of the principal-value integrand are split and
  // the tau^p singularity is integrated in closed form.
  auto near_origin = [&](double tau) {
    const double t2 = tau * tau;
    return std::pow(tau, p) * (std::expm1(-tau * z) + t2) / (1.0 - t2);
  };
  // (tau^p e^(-tau z) - e^(-z)) / (1 - tau^2), regular at tau = 1
  auto middle = [&](double tau) {
    if (tau == 1.0) return 0.5 * (z - p) * ez;
    const double lt = std::log(tau);
    const double den = (1.0 - tau) * (1.0 + tau);
    if (std::abs(tau - 1.0) * z < 1.0) return ez * std::expm1(p * lt - (tau - 1.0) * z) / den;
    return (std::exp(p * lt - tau * z) - ez) / den;
  };
  auto tail = [&](double y) {
    const double tau = 2.0 + y;
    return std::pow(tau, p) * std::exp(-tau * z) / ((1.0 - tau) * (1.0 + tau));
  };
  const QuadratureSpec piece = spec.tightened(4.0);
  double pv = integrate_finite(near_origin, 0.0, 0.5, piece, {p + 1.0, 0.0}).value;
  pv += std::pow(0.5, p + 1.0) / (p + 1.0) - ez * std::atanh(0.5);
  pv += integrate_finite(middle, 0.5, 2.0, piece).value;
  pv += integrate_semi_infinite(tail, 0.0, Decay::exponential(z), piece, std::max(1.0, 1.0 / z)).value;
  pv += 0.5 * std::log(3.0) * ez;
  const double c2 = mellin_lorentz(2.0 - 2.0 * hurst);
  return 0.5 * pi * std::cos(0.5 * pi * p) * ez - std::sin(0.5 * pi * p) * pv - c2;
}

double eta_transform_series(double hurst, double z) {
  check_hurst(hurst);
  z = std::abs(z);
  if (z == 0.0) return 0.0;
  const double c2 = mellin_lorentz(2.0 - 2.0 * hurst);
  const double sh = std::sinh(0.5 * z);
  double term = std::pow(z, 2.0 * hurst) / std::tgamma(2.0 * hurst + 1.0);
  double sum = term;
  const double z2 = z * z;
  for (int k = 1; k < 200; ++k) {
    const double b = 2.0 * hurst + 2.0 * k;
    term *= z2 / ((b - 1.0) * b);
    sum += term;
    if (term <= 1e-18 * sum) break;
  }
  return c2 * (2.0 * sh * sh - sum);
}

double eta_transform(double hurst, double z, const QuadratureSpec& spec) {
  z = std::abs(z);
  if (z <= 2.0) return eta_transform_series(hurst, z);
  return eta_transform_contour(hurst, z, spec);
}

double cosine_laplace_kernel(double alpha, double u) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("alpha must lie in (0,2)");
  if (u == 0.0) return 0.0;
  u = std::abs(u);
  const double d = alpha - 1.0;
  const double L = std::log1p(u * u);
  // (1 - A B) / d with A = (1+u^2)^(d/2), B = cos(d theta)
  auto one_minus_ab = [&](double theta) {
    const double x = 0.5 * d * L;
    const double am1_d = 0.5 * L * expm1_ratio(x);
    const double bm1_d = -theta * std::sin(0.5 * d * theta) * sinc(0.5 * d * theta);
    const double bm1 = d * bm1_d;
    return -am1_d - bm1_d - am1_d * bm1;
  };
  const double theta = std::atan(u);
  const double half_pi_sinc = 0.5 * pi * sinc(0.5 * pi * d);  // sin(pi d/2)/d
  if (u <= 1.0) {
    const double A = std::exp(0.5 * d * L);
    return -std::pow(u, alpha) * half_pi_sinc + one_minus_ab(theta) + u * A * theta * sinc(d * theta);
  }
  const double phi = std::atan(1.0 / u);
  const double c = std::cos(0.5 * pi * d);
  const double at = std::exp(0.5 * d * std::log1p(1.0 / (u * u)));
  const double atm1 = std::expm1(0.5 * d * std::log1p(1.0 / (u * u)));
  const double sh = std::sin(0.5 * d * phi);
  const double t1 = std::pow(u, alpha) *
                    (half_pi_sinc * (atm1 - 2.0 * at * sh * sh) - c * at * phi * sinc(d * phi));
  return t1 + one_minus_ab(theta);
}

}  // namespace ssgp
