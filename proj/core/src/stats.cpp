#include "ssgp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ssgp/errors.hpp"

namespace ssgp {

MomentStats sample_moments(const std::vector<double>& x) {
  if (x.size() < 2) throw StatisticsError("at least two samples are required");
  MomentStats m;
  m.count = static_cast<long>(x.size());
  const double n = static_cast<double>(x.size());
  double sum = 0.0;
  for (double v : x) sum += v;
  m.mean = sum / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - m.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  if (!(m2 > 0.0)) throw StatisticsError("samples have zero variance");
  m.variance = m2 / (n - 1.0);
  m2 /= n;
  m3 /= n;
  m4 /= n;
  m.skewness = m3 / std::pow(m2, 1.5);
  m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  return m;
}

double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double stephens(double d, double ne) {
  const double rn = std::sqrt(ne);
  return kolmogorov_q((rn + 0.12 + 0.11 / rn) * d);
}

}  // namespace

KsResult ks_normal(const std::vector<double>& samples, double variance) {
  if (samples.empty()) throw StatisticsError("no samples");
  if (!(variance > 0.0)) throw DomainError("reference variance must be > 0");
  std::vector<double> x = samples;
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  const double sd = std::sqrt(variance);
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = 0.5 * std::erfc(-x[i] / (sd * std::sqrt(2.0)));
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return {d, stephens(d, n)};
}

KsResult ks_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw StatisticsError("no samples");
  std::vector<double> x = a, y = b;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return {d, stephens(d, na * nb / (na + nb))};
}

StatTestResult stat_tests(const std::vector<double>& samples, double reference_variance) {
  if (samples.size() < 30) {
    std::ostringstream os;
    os << "stat_tests needs at least 30 samples, got " << samples.size();
    throw StatisticsError(os.str());
  }
  if (!(reference_variance > 0.0)) throw DomainError("reference variance must be > 0");
  StatTestResult r;
  r.moments = sample_moments(samples);
  r.ks = ks_normal(samples, reference_variance);
  return r;
}

}  // namespace ssgp
