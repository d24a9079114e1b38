#include "ssgp/variations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ssgp/errors.hpp"
#include "ssgp/parallel.hpp"
#include "ssgp/psi_table.hpp"

namespace ssgp {

namespace {

double factorial(int q) {
  double f = 1.0;
  for (int i = 2; i <= q; ++i) f *= i;
  return f;
}

long increment_count(long n, double t) {
  if (n < 1) throw DomainError("grid density n must be >= 1");
  if (!(t >= 0.0)) throw DomainError("time must be >= 0");
  return static_cast<long>(std::floor(n * t + 1e-9));
}

// Sum over j of per-row partial sums, rows split into blocks handled in parallel.
// The per-row results are combined in index order.
template <class RowFn>
double ordered_row_sum(long rows, RowFn&& row_block) {
  std::vector<double> partial(static_cast<std::size_t>(rows), 0.0);
  const long block = 64;
  const long blocks = (rows + block - 1) / block;
  parallel_for(static_cast<std::size_t>(blocks), [&](std::size_t b) {
    const long j0 = static_cast<long>(b) * block;
    const long j1 = std::min(rows, j0 + block);
    row_block(j0, j1, partial.data());
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

double rho_power_sum(const double* cov, const std::vector<double>& var, long j, int q) {
  double acc = 0.0;
  const double vj = var[static_cast<std::size_t>(j)];
  for (std::size_t k = 0; k < var.size(); ++k) {
    const double rho = std::clamp(cov[k] / std::sqrt(vj * var[k]), -1.0, 1.0);
    acc += std::pow(rho, q);
  }
  return acc;
}

void check_variances(const std::vector<double>& var, long n) {
  for (std::size_t j = 0; j < var.size(); ++j) {
    if (!(var[j] > 0.0)) {
      std::ostringstream os;
      os << "increment " << j << " at n=" << n << " has non-positive variance " << var[j];
      throw DegeneracyError(os.str(), n, static_cast<long>(j));
    }
  }
}

// derivatives of r(m) = 2 sum_k binom(e, 2k) m^(e-2k), m >= 8
struct SeriesDerivs {
  double r[4] = {0, 0, 0, 0};
};

SeriesDerivs second_difference_derivs(double e, double m) {
  SeriesDerivs d;
  double coef = 1.0;
  for (int k = 1; k <= 30; ++k) {
    coef *= (e - (2 * k - 2)) * (e - (2 * k - 1)) / ((2.0 * k - 1.0) * (2.0 * k));
    const double p = e - 2.0 * k;
    const double base = 2.0 * coef * std::pow(m, p);
    d.r[0] += base;
    d.r[1] += base * p / m;
    d.r[2] += base * p * (p - 1.0) / (m * m);
    d.r[3] += base * p * (p - 1.0) * (p - 2.0) / (m * m * m);
    if (std::abs(base) < 1e-20 * std::abs(d.r[0])) break;
  }
  return d;
}

}  // namespace

void check_clt_hypothesis(double exponent, int q) {
  if (q < 2) throw DomainError("Hermite rank q must be >= 2");
  if (!(exponent > 0.0 && exponent < 2.0 - 1.0 / q)) {
    std::ostringstream os;
    os << "the limit theorem needs 0 < alpha < 2 - 1/q = " << 2.0 - 1.0 / q << "; got alpha = "
       << exponent << " with q = " << q;
    throw DomainError(os.str());
  }
}

std::vector<double> exact_betas(const CovarianceKernel& kernel, long n, long count) {
  std::vector<double> b(static_cast<std::size_t>(count));
  for (long j = 0; j < count; ++j) b[static_cast<std::size_t>(j)] = increment_stats(kernel, n, j, j).beta_j;
  return b;
}

std::vector<double> exact_betas(const ModelParams& params, long n, long count) {
  std::vector<double> b(static_cast<std::size_t>(count));
  for (long j = 0; j < count; ++j) {
    const double v = x_increment_cov(params, n, j, j);
    if (!(v > 0.0)) {
      std::ostringstream os;
      os << "increment " << j << " at n=" << n << " has non-positive variance " << v;
      throw DegeneracyError(os.str(), n, j);
    }
    b[static_cast<std::size_t>(j)] = std::sqrt(v);
  }
  return b;
}

VariationResult hermite_variation(const SamplePath& path, const std::vector<double>& betas, int q,
                                  double t) {
  if (q < 1) throw DomainError("Hermite order q must be >= 1");
  const long n = path.grid.n;
  const long steps = increment_count(n, t);
  if (steps + 1 > static_cast<long>(path.values.size())) {
    throw DomainError("t lies beyond the path horizon");
  }
  if (static_cast<long>(betas.size()) < steps) throw DomainError("one beta per increment is required");
  VariationResult r;
  r.q = q;
  r.n = n;
  r.horizon = path.grid.horizon;
  r.times.assign(path.grid.times.begin(), path.grid.times.begin() + steps + 1);
  r.betas.assign(betas.begin(), betas.begin() + steps);
  r.values.resize(static_cast<std::size_t>(steps) + 1);
  r.values[0] = 0.0;
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  double acc = 0.0;
  for (long j = 0; j < steps; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    if (!(betas[ju] > 0.0)) throw DegeneracyError("beta must be positive", n, j);
    acc += hermite_poly(q, (path.values[ju + 1] - path.values[ju]) / betas[ju]);
    r.values[ju + 1] = norm * acc;
  }
  return r;
}

VariationResult hermite_variation(const SamplePath& path, const ModelParams& params, int q, double t) {
  if (q < 2) throw DomainError("Hermite order q must be >= 2");
  const long steps = increment_count(path.grid.n, t);
  return hermite_variation(path, exact_betas(params, path.grid.n, steps), q, t);
}

LimitVariance breuer_major_sigma2_at(double e, int q, long M) {
  check_clt_hypothesis(e, q);
  if (M < 8) throw DomainError("truncation M must be >= 8");
  const double pref = factorial(q) / std::pow(2.0, q);
  LimitVariance out;
  out.truncation_M = M;
  if (e == 1.0) {
    out.sigma_sq = factorial(q);
    return out;
  }
  // direct part, m = 1..M-1, summed from the small terms up
  double direct = 0.0;
  for (long m = M - 1; m >= 1; --m) direct += std::pow(power_second_difference(e, static_cast<double>(m)), q);
  // Euler-Maclaurin for m >= M
  const double Mm = static_cast<double>(M);
  auto f = [&](double x) { return std::pow(power_second_difference(e, Mm + x), q); };
  const double decay = q * (2.0 - e);
  const QuadratureSpec spec{1e-300, 1e-14, 4000, 0.0, false};
  const double integral = integrate_semi_infinite(f, 0.0, Decay::power(decay), spec, Mm).value;
  const SeriesDerivs d = second_difference_derivs(e, Mm);
  const double r0 = d.r[0], r1 = d.r[1], r2 = d.r[2], r3 = d.r[3];
  const double f0 = std::pow(r0, q);
  const double f1 = q * std::pow(r0, q - 1) * r1;
  const double f3 = q * (q - 1.0) * (q - 2.0) * std::pow(r0, q - 3) * r1 * r1 * r1 +
                    3.0 * q * (q - 1.0) * std::pow(r0, q - 2) * r1 * r2 + q * std::pow(r0, q - 1) * r3;
  const double tail = integral + 0.5 * f0 - f1 / 12.0 + f3 / 720.0;
  // next term f^(5)/30240, with f ~ C m^p
  const double p = q * (e - 2.0);
  const double f5 = std::abs(f0 * p * (p - 1) * (p - 2) * (p - 3) * (p - 4)) / std::pow(Mm, 5);
  out.sigma_sq = pref * (std::pow(2.0, q) + 2.0 * (direct + tail));
  out.tail_bound = pref * 2.0 * (f5 / 30240.0 + 1e-14 * std::abs(integral));
  return out;
}

LimitVariance breuer_major_sigma2(double e, int q, double tol) {
  check_clt_hypothesis(e, q);
  if (!(tol > 0.0)) throw DomainError("tolerance must be > 0");
  LimitVariance r = breuer_major_sigma2_at(e, q, 64);
  while (r.tail_bound > tol && r.truncation_M < (1L << 22)) {
    r = breuer_major_sigma2_at(e, q, 2 * r.truncation_M);
  }
  if (r.tail_bound > tol) {
    throw AccuracyError("limit variance tail did not reach the tolerance", r.sigma_sq, r.tail_bound);
  }
  return r;
}

double exact_variation_variance(const CovarianceKernel& kernel, int q, long n, double t) {
  if (q < 1) throw DomainError("Hermite order q must be >= 1");
  const long N = increment_count(n, t);
  if (N < 1) throw DomainError("need at least one increment");
  const double dn = static_cast<double>(n);
  std::vector<double> var(static_cast<std::size_t>(N));
  for (long k = 0; k < N; ++k) var[static_cast<std::size_t>(k)] = increment_cov(kernel, n, k, k);
  check_variances(var, n);
  auto row = [&](long j, std::vector<double>& out) {
    for (long k = 0; k <= N; ++k) out[static_cast<std::size_t>(k)] = kernel(j / dn, k / dn);
  };
  const double total = ordered_row_sum(N, [&](long j0, long j1, double* partial) {
    std::vector<double> lo(static_cast<std::size_t>(N) + 1), hi(lo.size()), cov(static_cast<std::size_t>(N));
    row(j0, lo);
    for (long j = j0; j < j1; ++j) {
      row(j + 1, hi);
      for (long k = 0; k < N; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        cov[ku] = hi[ku + 1] - hi[ku] - lo[ku + 1] + lo[ku];
      }
      partial[j] = rho_power_sum(cov.data(), var, j, q);
      std::swap(lo, hi);
    }
  });
  return factorial(q) * total / dn;
}

double exact_variation_variance(const ModelParams& params, int q, long n, double t) {
  if (q < 1) throw DomainError("Hermite order q must be >= 1");
  (void)ModelParams::make(params.hurst, params.gamma);
  const long N = increment_count(n, t);
  if (N < 1) throw DomainError("need at least one increment");
  const double a = params.alpha;
  const double na = std::pow(static_cast<double>(n), -a);
  // analytic parts: W depends on j-k, Y on j+k
  std::vector<double> wd(static_cast<std::size_t>(N)), ym(static_cast<std::size_t>(2 * N));
  for (long d = 0; d < N; ++d) wd[static_cast<std::size_t>(d)] = w_increment_cov(params, n, d, 0);
  for (long m = 0; m < 2 * N; ++m) ym[static_cast<std::size_t>(m)] = y_increment_cov(params, n, m, 0);
  // cross part at unit spacing: c(j, k) = E[U_j Y_k] = k^alpha psi(j/k), scaled by n^-alpha
  const auto table = psi_table_for(params);
  auto cross = [&](long j, long k) -> double {
    if (j == 0 || k == 0) return 0.0;
    const double kd = static_cast<double>(k);
    return std::pow(kd, a) * (*table)(static_cast<double>(j) / kd);
  };
  auto fill = [&](long j, std::vector<double>& c_row, std::vector<double>& d_row) {
    for (long k = 0; k <= N; ++k) {
      c_row[static_cast<std::size_t>(k)] = cross(j, k);
      d_row[static_cast<std::size_t>(k)] = cross(k, j);
    }
  };
  auto inc = [&](long j, long k, const std::vector<double>& c0, const std::vector<double>& c1,
                 const std::vector<double>& d0, const std::vector<double>& d1) {
    const auto ku = static_cast<std::size_t>(k);
    const double uy = c1[ku + 1] - c1[ku] - c0[ku + 1] + c0[ku];
    const double yu = d1[ku + 1] - d0[ku + 1] - d1[ku] + d0[ku];
    return wd[static_cast<std::size_t>(std::abs(j - k))] + ym[static_cast<std::size_t>(j + k)] + na * (uy + yu);
  };
  std::vector<double> var(static_cast<std::size_t>(N));
  for (long k = 0; k < N; ++k) var[static_cast<std::size_t>(k)] = x_increment_cov(params, n, k, k);
  check_variances(var, n);
  const double total = ordered_row_sum(N, [&](long j0, long j1, double* partial) {
    const std::size_t len = static_cast<std::size_t>(N) + 1;
    std::vector<double> c0(len), d0(len), c1(len), d1(len), cov(static_cast<std::size_t>(N));
    fill(j0, c0, d0);
    for (long j = j0; j < j1; ++j) {
      fill(j + 1, c1, d1);
      for (long k = 0; k < N; ++k) cov[static_cast<std::size_t>(k)] = inc(j, k, c0, c1, d0, d1);
      partial[j] = rho_power_sum(cov.data(), var, j, q);
      std::swap(c0, c1);
      std::swap(d0, d1);
    }
  });
  return factorial(q) * total / static_cast<double>(n);
}

}  // namespace ssgp
