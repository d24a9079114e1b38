#pragma once

// Discretization of the Brownian-sheet construction X = U + V + Y.
//
// In the variables xi = eta * y and y the integrands of U and V depend on xi
// only through cos(xi t) and sin(xi t). On the grid t_j = j/n these are
// periodic in xi with period 2 pi n and symmetric about pi n, so the xi-axis is
// folded onto theta in [0, pi n] with the weight summed over all images. The
// folded mesh reproduces the grid covariance up to the quadrature error of a
// smooth integral. U and Y share the normals of each cell; V uses its own.

#include <Eigen/Dense>
#include <vector>

#include "ssgp/analytic.hpp"
#include "ssgp/rng.hpp"
#include "ssgp/sampling.hpp"

namespace ssgp {

struct ConstructiveMesh {
  ModelParams params;
  Grid grid;
  /// theta nodes; the first node is theta = 0 and carries the part of the
  /// y-mass that the theta rule does not see (U and V vanish there).
  std::vector<double> theta;
  std::vector<double> y;
  /// sqrt(cell weight), theta.size() x y.size()
  Eigen::MatrixXd amp;
};

ConstructiveMesh build_constructive_mesh(const ModelParams& params, const Grid& grid,
                                         long nodes_eta = 256, long nodes_y = 256);

/// Covariances of the discretized components at (s, t).
struct ConstructiveCovariance {
  double x = 0.0;
  double u = 0.0;
  double v = 0.0;
  double y = 0.0;
  double u_y = 0.0;  // E[U_s Y_t]
  double y_u = 0.0;  // E[Y_s U_t]
};

ConstructiveCovariance constructive_cov(const ConstructiveMesh& mesh, double s, double t);

/// Largest relative gap between the discretized variance and x_cov over the
/// grid points after 0.
double constructive_diagonal_error(const ConstructiveMesh& mesh);

/// Paths of U + V + Y from the folded mesh. Throws AccuracyError when the
/// discretized variance misses x_cov by more than 5e-3 relative.
PathSet sample_x_constructive(const ModelParams& params, const Grid& grid, SeedSpec seed,
                              long count, long nodes_eta = 256, long nodes_y = 256);

}  // namespace ssgp
