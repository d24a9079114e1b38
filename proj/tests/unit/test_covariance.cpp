#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "ssgp/analytic.hpp"
#include "ssgp/covariance.hpp"
#include "ssgp/errors.hpp"
#include "ssgp/psi_table.hpp"

using namespace ssgp;
using std::numbers::pi;

namespace {
const double kSqrtPi = std::sqrt(pi);
const double kTwoMinusRoot2 = 2.0 - std::sqrt(2.0);
}  // namespace

TEST_CASE("fbm and bifractional kernels") {
  CHECK(fbm_cov(0.5, 1, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fbm_cov(0.75, 2, 2) == doctest::Approx(2.8284271).epsilon(1e-8));
  CHECK(fbm_cov(0.6, 1, 2) == doctest::Approx(1.1486984).epsilon(1e-7));
  CHECK(fbm_cov(0.6, 0, 2) == 0.0);
  CHECK(bifbm_cov(0.5, 1.0, 1, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(bifbm_cov(0.5, 0.5, 1, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(bifbm_cov(0.7, 0.4, 0, 3)) <= 1e-15);
  CHECK_THROWS_AS(fbm_cov(1.2, 1, 1), DomainError);
  CHECK_THROWS_AS(fbm_cov(0.5, -1, 1), DomainError);
}

TEST_CASE("auxiliary kernel") {
  CHECK(z_cov(1, 1, 1) == doctest::Approx(0.5));
  CHECK(z_cov(0.5, 2, 2) == doctest::Approx(0.5));
  CHECK(z_cov(0.8, 1, 3) == doctest::Approx(0.3298770).epsilon(1e-7));
  // Laplace representation int y^(gamma-1) e^(-(s+t) y) dy / Gamma(gamma)
  const double g = 0.8;
  const double lap = integrate_semi_infinite(
                         [g](double y) { return std::pow(y, g - 1) * std::exp(-4 * y); }, g - 1,
                         Decay::exponential(4), QuadratureSpec{1e-13, 1e-12, 2000, 0, true})
                         .value /
                     std::tgamma(g);
  CHECK(lap == doctest::Approx(z_cov(g, 1, 3)).epsilon(1e-10));
}

TEST_CASE("raw y integral") {
  CHECK(y_raw_integral(0.5, 1, 1) == doctest::Approx(2 * kSqrtPi * kTwoMinusRoot2).epsilon(1e-13));
  CHECK(y_raw_integral(0.9, 0, 3) == 0.0);
  CHECK(y_raw_integral(1.0, 1, 1) == doctest::Approx(2 * std::log(2.0)).epsilon(1e-13));

  const QuadratureSpec tight{1e-13, 1e-12, 4000, 0, true};
  for (double a : {0.3, 0.8, 0.999, 1.0, 1.001, 1.2, 1.7}) {
    for (auto [s, t] : {std::pair{1.0, 1.0}, std::pair{0.3, 2.0}, std::pair{1.5, 0.7}}) {
      const double q = integrate_semi_infinite(
                           [a, s, t](double y) {
                             return std::pow(y, -a - 1) * std::expm1(-y * t) * std::expm1(-y * s);
                           },
                           1 - a, Decay::power(a + 1), tight)
                           .value;
      const double tol = std::abs(a - 1.0) < 0.01 ? 1e-8 : 1e-10;
      CHECK(std::abs(y_raw_integral(a, s, t) - q) <= tol * std::max(1.0, std::abs(q)));
    }
  }
}

TEST_CASE("smooth component covariance") {
  const ModelParams half = ModelParams::make(0.5, 0.5);
  CHECK(y_cov(half, 1, 1) == doctest::Approx(kTwoMinusRoot2).epsilon(1e-13));
  CHECK(y_cov(half, 0, 1) == 0.0);
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (auto [h, g] : {std::pair{0.7, 0.2}, std::pair{0.35, 0.4}, std::pair{0.6, 0.2}}) {
    const ModelParams p = ModelParams::make(h, g);
    for (int i = 0; i < 5; ++i) {
      const double s = u(gen), t = u(gen);
      CHECK(y_cov(p, 2 * s, 2 * t) ==
            doctest::Approx(std::pow(2.0, p.alpha) * y_cov(p, s, t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("cross covariance") {
  const ModelParams half = ModelParams::make(0.5, 0.5);
  CHECK(cross_cov_uy(half, 1, 1) == doctest::Approx(-kTwoMinusRoot2).epsilon(1e-10));
  CHECK(cross_cov_uy(half, 0.4, 1.7) == doctest::Approx(-y_cov(half, 0.4, 1.7)).epsilon(1e-10));
  for (auto [h, g] : {std::pair{0.7, 0.2}, std::pair{0.35, 0.4}}) {
    const ModelParams p = ModelParams::make(h, g);
    CHECK(cross_cov_uy(p, 0, 1) == 0.0);
    CHECK(cross_cov_uy(p, 1, 0) == 0.0);
    for (auto [t, s] : {std::pair{1.0, 1.0}, std::pair{0.3, 1.4}, std::pair{2.0, 0.5}}) {
      const double r = cross_cov_uy(p, t, s);
      CHECK(r < 0);
      CHECK(cross_cov_uy(p, t, s, CrossMethod::nested) == doctest::Approx(r).epsilon(1e-7));
      CHECK(std::pow(s, p.alpha) * psi(p, t / s) == doctest::Approx(r).epsilon(1e-10));
    }
  }
}

TEST_CASE("psi interpolation table") {
  const ModelParams p = ModelParams::make(0.7, 0.2);
  const PsiTable table(p);
  for (double x : {1e-4, 0.01, 0.37, 1.0, 2.5, 90.0, 5000.0, 1e5}) {
    CHECK(table(x) == doctest::Approx(psi(p, x)).epsilon(1e-12));
  }
  CHECK(table(0.0) == 0.0);
  CHECK(psi_table_for(p).get() == psi_table_for(p).get());
}

TEST_CASE("process covariance routes") {
  const ModelParams half = ModelParams::make(0.5, 0.5);
  CHECK(x_cov(half, 1, 1, XMethod::h_half) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(x_cov(half, 1, 1, XMethod::spectral) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-7));
  CHECK(x_cov(half, 1, 1, XMethod::decomposed) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  for (XMethod m : {XMethod::decomposed, XMethod::spectral, XMethod::h_half})
    CHECK(x_cov(half, 0, 1.3, m) == 0.0);

  const ModelParams p = ModelParams::make(0.75, 0.5);
  CHECK(x_cov(p, 1, 1, XMethod::timedomain) ==
        doctest::Approx(x_cov(p, 1, 1, XMethod::decomposed)).epsilon(1e-6));
  CHECK(x_cov(p, 0, 1, XMethod::timedomain) == 0.0);
  CHECK_THROWS_AS(x_cov(p, 1, 1, XMethod::h_half), DomainError);
  CHECK_THROWS_AS(x_cov(ModelParams::make(0.4, 0.3), 1, 1, XMethod::timedomain), DomainError);
  CHECK(parse_x_method("timedomain") == XMethod::timedomain);
  CHECK(to_string(XMethod::h_half) == "h_half");
  CHECK_THROWS_AS(parse_x_method("nope"), DomainError);
}

TEST_CASE("decomposed and spectral routes agree on a grid") {
  for (auto [h, g] : {std::pair{0.35, 0.4}, std::pair{0.7, 0.2}}) {
    const ModelParams p = ModelParams::make(h, g);
    for (double s : {0.4, 1.2, 2.0}) {
      for (double t : {0.2, 1.0, 1.8}) {
        const double d = x_cov(p, s, t, XMethod::decomposed);
        CHECK(std::abs(x_cov(p, s, t, XMethod::spectral) - d) <= 1e-4 * (1 + std::abs(d)));
      }
    }
  }
}

TEST_CASE("self-similarity of the process covariance") {
  const ModelParams p = ModelParams::make(0.7, 0.2);
  const CovarianceKernel k = x_kernel(p);
  for (double c : {0.5, 2.0, 3.0}) {
    for (auto [s, t] : {std::pair{1.0, 1.0}, std::pair{0.3, 1.1}, std::pair{1.7, 0.6}}) {
      CHECK(k(c * s, c * t) == doctest::Approx(std::pow(c, p.alpha) * k(s, t)).epsilon(1e-8));
    }
  }
}

TEST_CASE("kernels are symmetric and positive semidefinite") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  for (auto [h, g] : {std::pair{0.7, 0.2}, std::pair{0.35, 0.4}, std::pair{0.5, 0.5}}) {
    const ModelParams p = ModelParams::make(h, g);
    for (const CovarianceKernel& k : {x_kernel(p), y_kernel(p), fbm_kernel(p.alpha / 2)}) {
      CHECK(k.symmetric);
      std::vector<double> t(16);
      for (double& v : t) v = u(gen);
      Eigen::MatrixXd gram(16, 16);
      for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) gram(i, j) = k(t[i], t[j]);
      CHECK((gram - gram.transpose()).cwiseAbs().maxCoeff() == 0.0);
      const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram).eigenvalues();
      CHECK(ev.minCoeff() >= -1e-8 * ev.maxCoeff());
    }
    CHECK_FALSE(cross_kernel(p).symmetric);
  }
}

TEST_CASE("increment statistics") {
  const double a = 1.2;
  const CovarianceKernel f = fbm_kernel(a / 2);
  const IncrementStats st = increment_stats(f, 8, 3, 3);
  CHECK(st.cov == doctest::Approx(std::pow(8.0, -a)).epsilon(1e-12));
  CHECK(st.rho == doctest::Approx(1.0));
  CHECK(increment_cov(fbm_kernel(0.5), 8, 2, 3) == doctest::Approx(0.0).epsilon(1e-15));

  const ModelParams p = ModelParams::make(0.7, 0.2);
  const CovarianceKernel x = x_kernel(p);
  const IncrementStats s0 = increment_stats(x, 4, 0, 0);
  CHECK(s0.beta_j * s0.beta_j ==
        doctest::Approx(std::pow(4.0, -p.alpha) * x_cov(p, 1, 1)).epsilon(1e-10));
  const IncrementStats s = increment_stats(x, 16, 2, 7);
  CHECK(s.beta_j > 0);
  CHECK(std::abs(s.rho) <= 1.0);
  CHECK(s.cov == doctest::Approx(s.rho * s.beta_j * s.beta_k).epsilon(1e-14));
  CHECK_THROWS_AS(increment_stats(x, 0, 0, 0), DomainError);
}

TEST_CASE("component increments") {
  const ModelParams p = ModelParams::make(0.7, 0.2);
  const double ks = constants_for(p).kappa_star;
  for (long n : {4L, 16L}) {
    CHECK(w_increment_cov(p, n, 2, 2) ==
          doctest::Approx(ks * std::pow(double(n), -p.alpha)).epsilon(1e-13));
  }
  CHECK(std::abs(w_increment_cov(p, 16, 2, 5) -
                 increment_cov(fbm_kernel(p.alpha / 2, ks), 16, 2, 5)) <= 1e-12);
  const ModelParams brownian = ModelParams::make(0.6, 0.2);  // alpha = 1
  CHECK(w_increment_cov(brownian, 10, 3, 4) == doctest::Approx(0.0).epsilon(1e-15));

  for (long j = 0; j < 12; ++j) {
    for (long k = 0; k < 12; ++k) {
      const double y = y_increment_cov(p, 12, j, k);
      CHECK(y >= 0.0);
      CHECK(y == doctest::Approx(increment_cov(y_kernel(p), 12, j, k)).epsilon(1e-7));
    }
  }
  const double total = x_increment_cov(p, 16, 3, 9);
  CHECK(total == doctest::Approx(increment_cov(x_kernel(p), 16, 3, 9)).epsilon(1e-10));
}

TEST_CASE("lemma bound ratios") {
  const ModelParams p = ModelParams::make(0.7, 0.2);
  for (long j = 1; j <= 16; ++j) {
    for (long k = 1; k <= 16; ++k) {
      const BoundRatios r = lemma_bound_ratios(p, 16, j, k);
      CHECK(std::isfinite(r.ratio_yy));
      CHECK(r.ratio_yy >= 0.0);
      CHECK(std::isfinite(r.ratio_wy));
    }
  }
  const BoundRatios edge = lemma_bound_ratios(p, 16, 0, 3);
  CHECK(std::isnan(edge.ratio_wy));
  CHECK(std::isfinite(edge.ratio_yy));
  CHECK_THROWS_AS(lemma_bound_ratios(p, 16, 0, 0), DomainError);

  // pinned regression value
  const ModelParams half = ModelParams::make(0.5, 0.5);
  CHECK(lemma_bound_ratios(half, 2, 1, 1).ratio_yy == doctest::Approx(0.14110472164033133).epsilon(1e-10));
}
