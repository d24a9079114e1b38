#pragma once

// One-dimensional transforms of the spectral weight g(eta) = eta^(1-2H)/(1+eta^2)
// and of the y-kernel y^(-alpha-1), used by the covariance representations.

#include "ssgp/quadrature.hpp"

namespace ssgp {

/// g(eta) = eta^(1-2H) / (1 + eta^2).
double spectral_weight(double hurst, double eta);

/// I(z) = int_0^inf g(eta) (cos(eta z) - 1) d eta, always <= 0.
///
/// For z <= 2 the power series
///   I(z) = c2 (cosh z - 1 - sum_k z^(2H+2k) / Gamma(2H+1+2k))
/// is summed; it keeps full relative accuracy as z -> 0. Larger arguments use
/// the rotated contour.
double eta_transform(double hurst, double z, const QuadratureSpec& spec);

/// The power series above.
double eta_transform_series(double hurst, double z);

/// Same quantity, always by the oscillatory route. Kept for cross-checks.
double eta_transform_oscillatory(double hurst, double z, const QuadratureSpec& spec);

/// Same quantity, always by the rotated-contour route (z > 0).
double eta_transform_contour(double hurst, double z, const QuadratureSpec& spec);

/// K(u) with int_0^inf y^(-alpha-1) (cos(a y) - 1)(1 - e^(-b y)) dy
///   = b^alpha Gamma(2-alpha)/alpha * K(a/b).
/// Evaluated in a form that stays accurate through alpha = 1.
double cosine_laplace_kernel(double alpha, double u);

}  // namespace ssgp
