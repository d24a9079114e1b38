#include "ssgp/sampling.hpp"

#include <unsupported/Eigen/FFT>
#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>
#include <sstream>

#include "ssgp/errors.hpp"
#include "ssgp/parallel.hpp"

namespace ssgp {

Grid Grid::make(long n, double horizon) {
  if (n < 1) throw DomainError("grid density n must be >= 1");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("grid horizon must be > 0");
  Grid g;
  g.n = n;
  g.horizon = horizon;
  const long last = static_cast<long>(std::floor(n * horizon + 1e-9));
  g.times.resize(static_cast<std::size_t>(last) + 1);
  for (long j = 0; j <= last; ++j) g.times[static_cast<std::size_t>(j)] = static_cast<double>(j) / n;
  return g;
}

long Grid::index_at(double t) const {
  if (!(t >= 0.0)) throw DomainError("time must be >= 0");
  const long j = static_cast<long>(std::floor(n * t + 1e-9));
  if (j >= static_cast<long>(times.size())) throw DomainError("time lies beyond the grid horizon");
  return j;
}

SamplePath PathSet::path(long r) const {
  SamplePath p;
  p.grid = grid;
  p.label = label;
  p.values.resize(static_cast<std::size_t>(values.rows()));
  for (Eigen::Index i = 0; i < values.rows(); ++i) p.values[static_cast<std::size_t>(i)] = values(i, r);
  return p;
}

std::vector<SamplePath> PathSet::paths() const {
  std::vector<SamplePath> out;
  out.reserve(static_cast<std::size_t>(count()));
  for (long r = 0; r < count(); ++r) out.push_back(path(r));
  return out;
}

CholeskyResult cholesky_psd(const Eigen::MatrixXd& gram) {
  if (gram.rows() != gram.cols()) throw DomainError("Gram matrix must be square");
  const Eigen::Index dim = gram.rows();
  if (dim == 0) return {Eigen::MatrixXd(0, 0), 0.0};
  const double scale = gram.trace() / static_cast<double>(dim);
  for (double eps : {0.0, 1e-12, 1e-10, 1e-8}) {
    Eigen::MatrixXd a = gram;
    const double jitter = eps * scale;
    a.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success) {
      Eigen::MatrixXd l = llt.matrixL();
      if (l.allFinite()) return {std::move(l), jitter};
    }
  }
  const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram, Eigen::EigenvaluesOnly)
                             .eigenvalues()
                             .minCoeff();
  std::ostringstream os;
  os << "matrix is not positive semidefinite within the jitter budget (min eigenvalue " << min_eig
     << ")";
  throw MatrixError(os.str(), min_eig);
}

Eigen::MatrixXd gram_matrix(const CovarianceKernel& kernel, const std::vector<double>& times) {
  const std::size_t m = times.size();
  Eigen::MatrixXd g(m, m);
  parallel_for(m, [&](std::size_t i) {
    for (std::size_t j = 0; j <= i; ++j) g(i, j) = kernel(times[i], times[j]);
  });
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) g(i, j) = g(j, i);
  return g;
}

namespace {

void check_count(long count) {
  if (count < 1) throw DomainError("replication count must be >= 1");
}

Eigen::MatrixXd normal_matrix(SeedSpec seed, Eigen::Index rows, long count) {
  Eigen::MatrixXd z(rows, count);
  parallel_for(static_cast<std::size_t>(count), [&](std::size_t r) {
    NormalStream(seed.replica(r)).fill(z.col(static_cast<Eigen::Index>(r)).data(),
                               static_cast<std::uint64_t>(rows));
  });
  return z;
}

PathSet paths_from_factor(const Eigen::MatrixXd& factor, const Grid& grid, SeedSpec seed,
                          long count, std::string label) {
  const Eigen::Index m = factor.rows();
  const Eigen::MatrixXd z = normal_matrix(seed, m, count);
  PathSet out;
  out.grid = grid;
  out.label = std::move(label);
  out.values = Eigen::MatrixXd::Zero(m + 1, count);
  out.values.bottomRows(m).noalias() = factor.triangularView<Eigen::Lower>() * z;
  return out;
}

}  // namespace

PathSet sample_gaussian_paths(const CovarianceKernel& kernel, const Grid& grid, SeedSpec seed,
                              long count, std::size_t cap) {
  check_count(count);
  if (grid.size() > cap) {
    std::ostringstream os;
    os << "grid has " << grid.size() << " points, above the sampler cap of " << cap;
    throw ResourceError(os.str());
  }
  const std::vector<double> inner(grid.times.begin() + 1, grid.times.end());
  const CholeskyResult chol = cholesky_psd(gram_matrix(kernel, inner));
  return paths_from_factor(chol.factor, grid, seed, count, kernel.label);
}

PathSet sample_fbm(double hurst, const Grid& grid, SeedSpec seed, long count, FbmMethod method,
                   bool* fell_back) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("Hurst parameter must lie in (0,1)");
  check_count(count);
  if (fell_back) *fell_back = false;
  const long steps = static_cast<long>(grid.size()) - 1;
  if (method == FbmMethod::cholesky || steps < 2) {
    PathSet p = sample_gaussian_paths(fbm_kernel(hurst), grid, seed, count);
    p.label = "fbm";
    return p;
  }
  // fractional Gaussian noise autocovariance at unit spacing
  const double h2 = 2.0 * hurst;
  const long m = 2 * steps;
  std::vector<std::complex<double>> c(static_cast<std::size_t>(m));
  for (long k = 0; k < m; ++k) {
    const long lag = k <= steps ? k : m - k;
    c[static_cast<std::size_t>(k)] = 0.5 * power_second_difference(h2, static_cast<double>(lag));
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> lambda;
  fft.fwd(lambda, c);
  double lmax = 0.0, lmin = 0.0;
  for (const auto& l : lambda) {
    lmax = std::max(lmax, l.real());
    lmin = std::min(lmin, l.real());
  }
  if (lmin < -1e-9 * lmax) {
    if (fell_back) *fell_back = true;
    return sample_fbm(hurst, grid, seed, count, FbmMethod::cholesky);
  }
  const double scale = std::pow(static_cast<double>(grid.n), -hurst);
  PathSet out;
  out.grid = grid;
  out.label = "fbm";
  out.values = Eigen::MatrixXd::Zero(steps + 1, count);
  parallel_for(static_cast<std::size_t>(count), [&](std::size_t r) {
    std::vector<double> z(static_cast<std::size_t>(2 * m));
    NormalStream(seed.replica(r)).fill(z.data(), z.size());
    std::vector<std::complex<double>> a(static_cast<std::size_t>(m)), x;
    for (long k = 0; k < m; ++k) {
      const double sd = std::sqrt(std::max(0.0, lambda[static_cast<std::size_t>(k)].real()) / m);
      a[static_cast<std::size_t>(k)] = sd * std::complex<double>(z[2 * k], z[2 * k + 1]);
    }
    fft.fwd(x, a);
    double acc = 0.0;
    for (long j = 0; j < steps; ++j) {
      acc += x[static_cast<std::size_t>(j)].real() * scale;
      out.values(j + 1, static_cast<Eigen::Index>(r)) = acc;
    }
  });
  return out;
}

YSpectralRule y_spectral_rule(const ModelParams& params, const Grid& grid, long nodes) {
  if (nodes < 16) throw DomainError("the y-rule needs at least 16 nodes");
  const double a = params.alpha;
  const double cut = std::log(1e12);
  const double u_lo = -std::log(grid.horizon) - cut / (2.0 - a);
  const double u_hi = std::log(static_cast<double>(grid.n)) + cut / a;
  const double h = (u_hi - u_lo) / (nodes - 1);
  YSpectralRule rule;
  rule.nodes.resize(static_cast<std::size_t>(nodes));
  rule.weights.resize(static_cast<std::size_t>(nodes));
  for (long i = 0; i < nodes; ++i) {
    const double y = std::exp(u_lo + i * h);
    rule.nodes[static_cast<std::size_t>(i)] = y;
    rule.weights[static_cast<std::size_t>(i)] = h * y * ((i == 0 || i == nodes - 1) ? 0.5 : 1.0);
  }
  return rule;
}

double y_spectral_cov(const ModelParams& params, const YSpectralRule& rule, double s, double t) {
  const double yc = constants_for(params).y_const;
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double y = rule.nodes[i];
    acc += rule.weights[i] * std::pow(y, -params.alpha - 1.0) * std::expm1(-y * t) *
           std::expm1(-y * s);
  }
  return yc * acc;
}

PathSet sample_y_spectral(const ModelParams& params, const Grid& grid, SeedSpec seed, long count,
                          long nodes) {
  check_count(count);
  const YSpectralRule rule = y_spectral_rule(params, grid, nodes);
  double worst = 0.0;
  for (std::size_t j = 1; j < grid.size(); ++j) {
    const double t = grid.times[j];
    const double exact = y_cov(params, t, t);
    worst = std::max(worst, std::abs(y_spectral_cov(params, rule, t, t) / exact - 1.0));
  }
  if (worst > 1e-3) {
    std::ostringstream os;
    os << "y-rule with " << nodes << " nodes misses the Y variance by " << worst << " (relative)";
    throw AccuracyError(os.str(), worst, worst);
  }
  const double yc = constants_for(params).y_const;
  const Eigen::Index m = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd basis(m, nodes);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (long i = 0; i < nodes; ++i) {
      const double y = rule.nodes[static_cast<std::size_t>(i)];
      basis(j, i) = std::sqrt(yc * rule.weights[static_cast<std::size_t>(i)] *
                              std::pow(y, -params.alpha - 1.0)) *
                    -std::expm1(-y * grid.times[static_cast<std::size_t>(j)]);
    }
  }
  PathSet out;
  out.grid = grid;
  out.label = "Y";
  out.values = basis * normal_matrix(seed, nodes, count);
  out.values.row(0).setZero();
  return out;
}

void write_paths_csv(std::ostream& out, const PathSet& paths, const std::string& meta) {
  out << "# schema=ssgp.paths/1\n";
  out << "# label=" << paths.label << "\n";
  out << "# n=" << paths.grid.n << " horizon=" << paths.grid.horizon << "\n";
  if (!meta.empty()) {
    std::istringstream lines(meta);
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << "\n";
  }
  out << "t";
  for (long r = 0; r < paths.count(); ++r) out << ",path_" << r;
  out << "\n";
  const auto old_precision = out.precision(17);
  for (Eigen::Index j = 0; j < paths.values.rows(); ++j) {
    out << paths.grid.times[static_cast<std::size_t>(j)];
    for (long r = 0; r < paths.count(); ++r) out << "," << paths.values(j, r);
    out << "\n";
  }
  out.precision(old_precision);
}

}  // namespace ssgp
