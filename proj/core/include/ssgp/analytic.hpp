#pragma once

// Model parameters, derived constants and Hermite polynomials.

namespace ssgp {

/// Parameter bundle of the process X.
///
/// `hurst` is the Hurst index H of the driving fractional Brownian motion,
/// `gamma` the exponent of the kernel E[Z_s Z_t] = (s+t)^-gamma, and
/// `alpha = 2H - gamma`. The process is self-similar with exponent alpha/2.
struct ModelParams {
  double hurst = 0.5;
  double gamma = 0.5;
  double alpha = 0.5;

  /// Validates 0 < H < 1 and 0 < gamma < 2H; throws DomainError otherwise.
  static ModelParams make(double hurst, double gamma);

  double self_similarity() const noexcept { return 0.5 * alpha; }
};

struct ModelConstants {
  double kappa_paper = 0;    // c1 / Gamma(gamma)
  double c_H_sq = 0;         // 2 pi / (Gamma(2H+1) sin(pi H))
  double c1 = 0;             // int_0^inf z^(gamma-1) / (1+z^2) dz
  double c2 = 0;             // int_0^inf eta^(1-2H) / (1+eta^2) d eta
  double kappa_star = 0;     // variance scale of the fBm component W
  double y_const = 0;        // 2 c2 / (Gamma(gamma) C_H^2)
  double lambda1_paper = 0;  // 4 pi c2 / (Gamma(gamma) Gamma(2H+1) sin(pi H))
  double spectral_prefactor = 0;  // 2 / (Gamma(gamma) C_H^2)
};

ModelConstants constants_for(const ModelParams& params);

/// Probabilists' Hermite polynomial He_q(x) by the three-term recurrence.
double hermite_poly(int q, double x);

/// int_0^inf z^(p-1) / (1+z^2) dz = pi / (2 sin(pi p / 2)), 0 < p < 2.
double mellin_lorentz(double p);

/// The constant kappa = (1/Gamma(gamma)) int_0^inf z^(gamma-1)/(1+z^2) dz.
double kappa_paper(double gamma);

/// Fourier normalization C_h^2 = 2 pi / (Gamma(2h+1) sin(pi h)) of fBm with index h.
double fbm_spectral_constant_sq(double h);

double gamma_fn(double x);

/// |m+1|^e - 2|m|^e + |m-1|^e, accurate for large |m| (series in 1/m^2).
double power_second_difference(double e, double m);

/// power_second_difference(e, m) / (e - 1), continuous through e = 1.
double power_second_difference_over_em1(double e, double m);

/// (x^e - x) / (e - 1) for x >= 0, continuous through e = 1 (x ln x there).
double power_excess_over_em1(double e, double x);

}  // namespace ssgp
