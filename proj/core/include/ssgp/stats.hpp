#pragma once

#include <vector>

namespace ssgp {

struct MomentStats {
  long count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

MomentStats sample_moments(const std::vector<double>& samples);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Asymptotic Kolmogorov tail probability Q(lambda) = 2 sum (-1)^(k-1) e^(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

/// One-sample KS test against N(0, variance) (Stephens' small-sample scaling).
KsResult ks_normal(const std::vector<double>& samples, double variance);
KsResult ks_two_sample(const std::vector<double>& a, const std::vector<double>& b);

struct StatTestResult {
  MomentStats moments;
  KsResult ks;
};

/// Moments plus the KS test against N(0, reference_variance). Needs at least
/// 30 samples and a non-degenerate sample.
StatTestResult stat_tests(const std::vector<double>& samples, double reference_variance);

}  // namespace ssgp
