#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ssgp/errors.hpp"
#include "ssgp/io.hpp"
#include "ssgp/sampling.hpp"
#include "ssgp/variations.hpp"

using namespace ssgp;

TEST_CASE("hermite variation of a constant path") {
  const ModelParams p = ModelParams::make(0.7, 0.2);
  SamplePath zero{Grid::make(16), std::vector<double>(17, 0.0), "X"};
  const VariationResult r = hermite_variation(zero, p, 2, 1.0);
  CHECK(r.final_value() == doctest::Approx(-4.0).epsilon(1e-15));
  CHECK(r.values.front() == 0.0);
  CHECK(r.betas.size() == 16);
  const VariationResult at0 = hermite_variation(zero, p, 2, 0.0);
  CHECK(at0.final_value() == 0.0);
  CHECK_THROWS_AS(hermite_variation(zero, p, 1, 1.0), DomainError);
  CHECK_THROWS_AS(hermite_variation(zero, p, 2, 2.0), DomainError);
}

TEST_CASE("hermite variation on a sampled path") {
  const ModelParams p = ModelParams::make(0.7, 0.2);
  const Grid g = Grid::make(32);
  const PathSet ps = sample_gaussian_paths(x_kernel(p), g, SeedSpec{42, 0}, 1);
  const SamplePath path = ps.path(0);
  const VariationResult r = hermite_variation(path, p, 2, 1.0);
  CHECK(r.final_value() == doctest::Approx(1.8373587106428504).epsilon(1e-9));

  // scaling path and betas together leaves the statistic unchanged
  SamplePath scaled = path;
  for (double& v : scaled.values) v *= 3.0;
  std::vector<double> b = r.betas;
  for (double& v : b) v *= 3.0;
  const VariationResult rs = hermite_variation(scaled, b, 2, 1.0);
  for (std::size_t i = 0; i < r.values.size(); ++i)
    CHECK(rs.values[i] == doctest::Approx(r.values[i]).epsilon(1e-14));

  std::ostringstream os;
  write_variation_csv(os, r);
  CHECK(os.str().find("t,F_n\n") != std::string::npos);
}

TEST_CASE("limit variance") {
  for (int q : {2, 3, 4}) {
    const LimitVariance lv = breuer_major_sigma2(1.0, q);
    CHECK(std::abs(lv.sigma_sq - std::tgamma(q + 1.0)) <= lv.tail_bound);
    CHECK(lv.sigma_sq == std::tgamma(q + 1.0));
  }
  const LimitVariance a = breuer_major_sigma2(1.2, 2);
  CHECK(a.tail_bound <= 1e-12);
  const LimitVariance b = breuer_major_sigma2_at(1.2, 2, 2 * a.truncation_M);
  CHECK(std::abs(a.sigma_sq - b.sigma_sq) <= 1e-8);
  CHECK(a.sigma_sq == doctest::Approx(2.16426164136549).epsilon(1e-12));
  CHECK_THROWS_AS(breuer_major_sigma2(1.6, 2), DomainError);
  CHECK_THROWS_AS(breuer_major_sigma2(1.0, 1), DomainError);
  CHECK_NOTHROW(check_clt_hypothesis(1.4, 2));
}

TEST_CASE("exact finite-n variance") {
  CovarianceKernel independent{[](double s, double t) { return std::min(s, t); }, "bm", true};
  CHECK(exact_variation_variance(independent, 2, 10, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(exact_variation_variance(independent, 3, 10, 0.55) ==
        doctest::Approx(6.0 * 5 / 10).epsilon(1e-12));

  const ModelParams p = ModelParams::make(0.7, 0.2);
  const CovarianceKernel x = x_kernel(p);
  // q = 1: n^-1 sum of correlations
  const long n = 16;
  double s = 0;
  const std::vector<double> beta = exact_betas(x, n, n);
  for (long j = 0; j < n; ++j)
    for (long k = 0; k < n; ++k) s += increment_cov(x, n, j, k) / (beta[j] * beta[k]);
  CHECK(exact_variation_variance(x, 1, n, 1.0) == doctest::Approx(s / n).epsilon(1e-10));

  const double v64k = exact_variation_variance(x, 2, 64, 1.0);
  const double v64p = exact_variation_variance(p, 2, 64, 1.0);
  CHECK(v64k == doctest::Approx(v64p).epsilon(1e-9));

  const double sigma = breuer_major_sigma2(p.alpha, 2).sigma_sq;
  const double g256 = std::abs(exact_variation_variance(p, 2, 256, 1.0) - sigma);
  const double g1024 = std::abs(exact_variation_variance(p, 2, 1024, 1.0) - sigma);
  CHECK(g1024 < g256);

  const ModelParams p3 = ModelParams::make(0.55, 0.3);
  const double s3 = breuer_major_sigma2(p3.alpha, 3).sigma_sq;
  const double h256 = std::abs(exact_variation_variance(p3, 3, 256, 1.0) - s3);
  const double h1024 = std::abs(exact_variation_variance(p3, 3, 1024, 1.0) - s3);
  CHECK(h1024 < h256);
}

TEST_CASE("betas of the params and kernel routes agree") {
  const ModelParams p = ModelParams::make(0.35, 0.4);
  const std::vector<double> a = exact_betas(p, 32, 32);
  const std::vector<double> b = exact_betas(x_kernel(p), 32, 32);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-10));
}
