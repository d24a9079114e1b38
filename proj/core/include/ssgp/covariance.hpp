#pragma once

// Covariance kernels of the process X = W + Y and of its pieces.
//
// Time arguments are nonnegative; every process starts at 0. The fBm component
// W = U + V has covariance kappa_star * R_{alpha/2}, Y is smooth on (0, inf),
// and U, Y are driven by the same noise, which gives the cross term
// E[U_t Y_s] = s^alpha psi(t/s).

#include <functional>
#include <memory>
#include <string>

#include "ssgp/analytic.hpp"
#include "ssgp/quadrature.hpp"

namespace ssgp {

class PsiTable;

enum class XMethod { decomposed, spectral, timedomain, h_half };
enum class CrossMethod { reduced, nested };

XMethod parse_x_method(const std::string& name);
std::string to_string(XMethod method);

double fbm_cov(double hurst, double s, double t);
double bifbm_cov(double hurst, double k, double s, double t);
double z_cov(double gamma, double s, double t);

/// int_0^inf y^(-alpha-1) (1 - e^(-yt)) (1 - e^(-ys)) dy in closed form.
double y_raw_integral(double alpha, double s, double t);
double y_cov(const ModelParams& params, double s, double t);

/// E[U_t Y_s]. Not symmetric in (t, s); always <= 0.
///
/// `reduced` integrates the closed-form y-transform against g(eta) on a
/// logarithmic axis; `nested` evaluates the eta-transform inside the
/// y-integral and is slower but shares no algebra with the reduced form.
double cross_cov_uy(const ModelParams& params, double t, double s,
                    CrossMethod method = CrossMethod::reduced,
                    const QuadratureSpec& spec = QuadratureSpec::oscillatory());

/// psi(x) = E[U_x Y_1].
double psi(const ModelParams& params, double x);

/// Spec for the spectral and time-domain routes.
QuadratureSpec default_x_cov_spec(XMethod method);

double x_cov(const ModelParams& params, double s, double t, XMethod method = XMethod::decomposed);
double x_cov(const ModelParams& params, double s, double t, XMethod method,
             const QuadratureSpec& spec);

/// A covariance function (s, t) -> real with a label.
struct CovarianceKernel {
  std::function<double(double, double)> eval;
  std::string label;
  bool symmetric = true;

  double operator()(double s, double t) const { return eval(s, t); }
};

CovarianceKernel fbm_kernel(double hurst, double scale = 1.0);
CovarianceKernel y_kernel(const ModelParams& params);
/// (t, s) -> E[U_t Y_s]; labeled non-symmetric.
CovarianceKernel cross_kernel(const ModelParams& params);
/// The process X. The decomposed method evaluates psi through an
/// interpolation table built once per kernel.
CovarianceKernel x_kernel(const ModelParams& params, XMethod method = XMethod::decomposed);

struct IncrementStats {
  long n = 1;
  long j = 0;
  long k = 0;
  double cov = 0.0;
  double beta_j = 0.0;
  double beta_k = 0.0;
  double rho = 0.0;
};

/// Covariance of the increments over [j/n, (j+1)/n] and [k/n, (k+1)/n].
double increment_cov(const CovarianceKernel& kernel, long n, long j, long k);
IncrementStats increment_stats(const CovarianceKernel& kernel, long n, long j, long k);

double w_increment_cov(const ModelParams& params, long n, long j, long k);
/// E[dY_j dY_k] from the closed form, free of cancellation.
double y_increment_cov(const ModelParams& params, long n, long j, long k);
/// E[dU_j dY_k].
double uy_increment_cov(const ModelParams& params, long n, long j, long k);
/// E[dX_j dX_k] assembled from the component increments above.
double x_increment_cov(const ModelParams& params, long n, long j, long k);

struct BoundRatios {
  double ratio_yy = 0.0;
  double ratio_wy = 0.0;
};

/// ratio_yy = |E[dY_j dY_k]| / (n^-alpha (j+k)^(alpha-2)) (needs j+k >= 1),
/// ratio_wy = |E[dW_j dY_k]| / (n^-alpha j^(2H-2) k^-gamma) (needs j, k >= 1).
/// A ratio whose index condition fails is returned as NaN.
BoundRatios lemma_bound_ratios(const ModelParams& params, long n, long j, long k);

}  // namespace ssgp
