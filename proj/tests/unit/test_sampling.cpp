#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ssgp/covariance.hpp"
#include "ssgp/errors.hpp"
#include "ssgp/sampling.hpp"
#include "ssgp/stats.hpp"

using namespace ssgp;

TEST_CASE("grid") {
  const Grid g = Grid::make(4, 1.5);
  REQUIRE(g.size() == 7);
  CHECK(g.times.front() == 0.0);
  CHECK(g.times.back() == 1.5);
  CHECK(g.index_at(0.6) == 2);
  CHECK(Grid::make(3, 1.0).times.back() == 1.0);
  CHECK_THROWS_AS(Grid::make(0, 1.0), DomainError);
  CHECK_THROWS_AS(Grid::make(4, 0.0), DomainError);
}

TEST_CASE("cholesky with jitter") {
  const CholeskyResult id = cholesky_psd(Eigen::MatrixXd::Identity(4, 4));
  CHECK((id.factor - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(id.jitter == 0.0);

  Eigen::Matrix2d m;
  m << 1, 0.5, 0.5, 1;
  const CholeskyResult two = cholesky_psd(m);
  CHECK(two.factor(0, 0) == doctest::Approx(1.0));
  CHECK(two.factor(0, 1) == 0.0);
  CHECK(two.factor(1, 0) == doctest::Approx(0.5));
  CHECK(two.factor(1, 1) == doctest::Approx(std::sqrt(0.75)));

  Eigen::Matrix2d singular;
  singular << 1, 1, 1, 1;
  const CholeskyResult j = cholesky_psd(singular);
  CHECK(j.jitter >= 0.0);
  CHECK((j.factor * j.factor.transpose() - singular).cwiseAbs().maxCoeff() <= 1e-7);

  Eigen::Matrix2d indefinite;
  indefinite << 1, 0, 0, -1;
  try {
    cholesky_psd(indefinite);
    FAIL("expected a MatrixError");
  } catch (const MatrixError& e) {
    CHECK(e.min_eigenvalue() == doctest::Approx(-1.0));
  }

  const ModelParams p = ModelParams::make(0.7, 0.2);
  std::vector<double> t;
  for (int i = 1; i <= 16; ++i) t.push_back(i / 16.0);
  const Eigen::MatrixXd gram = gram_matrix(x_kernel(p), t);
  const CholeskyResult f = cholesky_psd(gram);
  CHECK((f.factor * f.factor.transpose() - gram).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("exact sampler is deterministic and centered") {
  const ModelParams p = ModelParams::make(0.7, 0.2);
  const Grid g = Grid::make(8);
  const CovarianceKernel k = x_kernel(p);
  const PathSet a = sample_gaussian_paths(k, g, SeedSpec{42, 0}, 5000);
  const PathSet b = sample_gaussian_paths(k, g, SeedSpec{42, 0}, 5000);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.values.row(0).cwiseAbs().maxCoeff() == 0.0);
  const long m = a.count();
  for (Eigen::Index i = 1; i < a.values.rows(); ++i) {
    const double mean = a.values.row(i).mean();
    const double sd = std::sqrt(k(g.times[i], g.times[i]));
    CHECK(std::abs(mean) <= 4 * sd / std::sqrt(double(m)));
  }
  // a later replication does not depend on how many come before it
  const PathSet shifted = sample_gaussian_paths(k, g, SeedSpec{42, 7}, 1);
  CHECK((shifted.values.col(0) - a.values.col(7)).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(sample_gaussian_paths(k, Grid::make(8), SeedSpec{}, 1, 4), ResourceError);
}

TEST_CASE("streams 0 and 1 give independent paths") {
  const ModelParams p = ModelParams::make(0.7, 0.2);
  const CovarianceKernel k = x_kernel(p);
  const Grid g = Grid::make(4);
  const long m = 4000;
  const PathSet all = sample_gaussian_paths(k, g, SeedSpec{3, 0}, 2 * m);
  // replication r uses stream r: pair even and odd streams
  double sxy = 0, sxx = 0, syy = 0;
  for (long r = 0; r < m; ++r) {
    const double x = all.values(4, 2 * r), y = all.values(4, 2 * r + 1);
    sxy += x * y;
    sxx += x * x;
    syy += y * y;
  }
  const double corr = sxy / std::sqrt(sxx * syy);
  CHECK(std::abs(corr) <= 5.0 / std::sqrt(double(m)));
}

TEST_CASE("fbm samplers") {
  const Grid g = Grid::make(16);
  const long m = 5000;
  SUBCASE("Brownian increments are uncorrelated") {
    const PathSet b = sample_fbm(0.5, g, SeedSpec{1, 0}, m);
    double c = 0, v = 0;
    for (long r = 0; r < m; ++r) {
      const double d1 = b.values(5, r) - b.values(4, r), d2 = b.values(6, r) - b.values(5, r);
      c += d1 * d2;
      v += d1 * d1;
    }
    CHECK(std::abs(c / v) <= 5.0 / std::sqrt(double(m)));
  }
  SUBCASE("unit variance at time one") {
    const PathSet b = sample_fbm(0.75, g, SeedSpec{2, 0}, m);
    const double var = b.values.row(16).squaredNorm() / m;
    CHECK(std::abs(var - 1.0) <= 5.0 * std::sqrt(2.0 / m));
  }
  SUBCASE("cholesky and circulant agree in law") {
    bool fell_back = true;
    const PathSet c = sample_fbm(0.75, g, SeedSpec{3, 0}, m, FbmMethod::cholesky);
    const PathSet f = sample_fbm(0.75, g, SeedSpec{4, 0}, m, FbmMethod::circulant, &fell_back);
    CHECK_FALSE(fell_back);
    std::vector<double> a(m), b(m);
    for (long r = 0; r < m; ++r) {
      a[r] = c.values(16, r);
      b[r] = f.values(16, r);
    }
    CHECK(ks_two_sample(a, b).p_value > 0.01);
  }
}

TEST_CASE("spectral sampler of the smooth component") {
  const ModelParams p = ModelParams::make(0.5, 0.5);
  const Grid g = Grid::make(4);
  const PathSet y = sample_y_spectral(p, g, SeedSpec{5, 0}, 10);
  CHECK(y.values.row(0).cwiseAbs().maxCoeff() == 0.0);
  const double exact = 2.0 - std::sqrt(2.0);
  const double e256 = std::abs(y_spectral_cov(p, y_spectral_rule(p, g, 256), 1, 1) - exact);
  const double e32 = std::abs(y_spectral_cov(p, y_spectral_rule(p, g, 32), 1, 1) - exact);
  const double e64 = std::abs(y_spectral_cov(p, y_spectral_rule(p, g, 64), 1, 1) - exact);
  CHECK(e256 <= 1e-3 * exact);
  CHECK(e64 < e32);
}

TEST_CASE("paths csv") {
  const PathSet b = sample_fbm(0.5, Grid::make(2), SeedSpec{1, 0}, 2);
  std::ostringstream os;
  write_paths_csv(os, b, "note=x");
  const std::string s = os.str();
  CHECK(s.rfind("# schema=ssgp.paths/1\n", 0) == 0);
  CHECK(s.find("# note=x\n") != std::string::npos);
  CHECK(s.find("t,path_0,path_1\n") != std::string::npos);
}
