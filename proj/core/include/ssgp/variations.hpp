#pragma once

#include <vector>

#include "ssgp/analytic.hpp"
#include "ssgp/covariance.hpp"
#include "ssgp/sampling.hpp"

namespace ssgp {

/// F_n on the grid times 0, 1/n, ..., floor(nt)/n.
struct VariationResult {
  int q = 2;
  long n = 1;
  double horizon = 1.0;
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> betas;  // beta_{j,n}, j = 0..floor(nt)-1

  double final_value() const { return values.back(); }
};

/// Exact increment norms beta_{j,n} = ||X_{(j+1)/n} - X_{j/n}||, j < count.
std::vector<double> exact_betas(const ModelParams& params, long n, long count);
std::vector<double> exact_betas(const CovarianceKernel& kernel, long n, long count);

/// F_n(t) = n^(-1/2) sum_{j < floor(nt)} He_q(dX_j / beta_j) with exact betas.
VariationResult hermite_variation(const SamplePath& path, const ModelParams& params, int q, double t);
/// Same statistic with caller-supplied normalizations (one per increment).
VariationResult hermite_variation(const SamplePath& path, const std::vector<double>& betas, int q,
                                  double t);

struct LimitVariance {
  double sigma_sq = 0.0;
  long truncation_M = 0;
  double tail_bound = 0.0;
};

/// sigma^2 = (q!/2^q) sum_{m in Z} (|m+1|^e - 2|m|^e + |m-1|^e)^q.
///
/// Terms with |m| < M are summed directly; the remainder is replaced by its
/// Euler-Maclaurin expansion (integral plus three correction terms), and
/// tail_bound estimates the first neglected term. M doubles from 64 until
/// tail_bound <= tol.
LimitVariance breuer_major_sigma2(double exponent, int q, double tol = 1e-12);

/// The same sum with a fixed cut M (no adaptation).
LimitVariance breuer_major_sigma2_at(double exponent, int q, long M);

/// Var(F_n(t)) = n^-1 sum_{j,k < floor(nt)} q! rho_{jk}^q, computed exactly.
double exact_variation_variance(const CovarianceKernel& kernel, int q, long n, double t);
double exact_variation_variance(const ModelParams& params, int q, long n, double t);

/// Throws DomainError unless 0 < exponent < 2 - 1/q and q >= 2.
void check_clt_hypothesis(double exponent, int q);

}  // namespace ssgp
