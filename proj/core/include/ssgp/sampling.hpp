#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "ssgp/analytic.hpp"
#include "ssgp/covariance.hpp"
#include "ssgp/rng.hpp"

namespace ssgp {

/// Uniform grid t_j = j/n, j = 0..floor(nT).
struct Grid {
  long n = 1;
  double horizon = 1.0;
  std::vector<double> times;

  static Grid make(long n, double horizon = 1.0);
  std::size_t size() const noexcept { return times.size(); }
  /// Index of the last grid point not after t.
  long index_at(double t) const;
};

struct SamplePath {
  Grid grid;
  std::vector<double> values;
  std::string label;
};

/// M paths on a common grid, one column per replication.
struct PathSet {
  Grid grid;
  Eigen::MatrixXd values;  // grid.size() x M
  std::string label;

  long count() const { return static_cast<long>(values.cols()); }
  SamplePath path(long r) const;
  std::vector<SamplePath> paths() const;
};

struct CholeskyResult {
  Eigen::MatrixXd factor;  // lower triangular
  double jitter = 0.0;     // diagonal shift actually added
};

/// Cholesky factor of a symmetric PSD matrix, retrying with diagonal jitter
/// eps * trace / dim for eps in {1e-12, 1e-10, 1e-8}; throws MatrixError
/// with the smallest eigenvalue when all attempts fail.
CholeskyResult cholesky_psd(const Eigen::MatrixXd& gram);

Eigen::MatrixXd gram_matrix(const CovarianceKernel& kernel, const std::vector<double>& times);

inline constexpr std::size_t kDefaultGridCap = 4096;

/// Exact-law sampler: Gram matrix of the kernel on the grid points after 0,
/// factorized once; the value at t = 0 is pinned to 0. Replication r draws
/// from stream seed.replica(r).
PathSet sample_gaussian_paths(const CovarianceKernel& kernel, const Grid& grid, SeedSpec seed,
                              long count, std::size_t cap = kDefaultGridCap);

enum class FbmMethod { cholesky, circulant };

/// fBm paths. The circulant method embeds the increment autocovariance in a
/// circulant matrix; a negative eigenvalue beyond -1e-9 relative makes it fall
/// back to Cholesky and report that through `fell_back`.
PathSet sample_fbm(double hurst, const Grid& grid, SeedSpec seed, long count,
                   FbmMethod method = FbmMethod::cholesky, bool* fell_back = nullptr);

/// Quadrature nodes and weights for the y-axis of the smooth component.
struct YSpectralRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

YSpectralRule y_spectral_rule(const ModelParams& params, const Grid& grid, long nodes);

/// Covariance of the discretized Y at (s, t).
double y_spectral_cov(const ModelParams& params, const YSpectralRule& rule, double s, double t);

/// Y_t = sum_i sqrt(y_const w_i y_i^(-alpha-1)) (1 - e^(-y_i t)) xi_i.
/// Throws AccuracyError when the discretized variance misses y_cov by more
/// than 1e-3 relative at some grid point.
PathSet sample_y_spectral(const ModelParams& params, const Grid& grid, SeedSpec seed, long count,
                          long nodes = 256);

/// CSV with one row per grid time and one column per replication.
void write_paths_csv(std::ostream& out, const PathSet& paths, const std::string& meta = "");

}  // namespace ssgp
