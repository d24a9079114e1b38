#include "ssgp/constructive.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ssgp/covariance.hpp"
#include "ssgp/errors.hpp"
#include "ssgp/parallel.hpp"

namespace ssgp {

namespace {

using std::numbers::pi;

// 8-point Gauss-Legendre on [-1, 1]
constexpr double kGlX[4] = {0.183434642495649804939476142360184, 0.525532409916328985817739049189246,
                            0.796666477413626739591553936475830, 0.960289856497536231683560868569473};
constexpr double kGlW[4] = {0.362683783378361982965150449277195, 0.313706645877887287337962201986601,
                            0.222381034453374470544355994426241, 0.101228536290376259152531354309962};

void add_panel(double a, double b, std::vector<double>& x, std::vector<double>& w) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (int i = 0; i < 4; ++i) {
    x.push_back(c - h * kGlX[i]);
    w.push_back(h * kGlW[i]);
    x.push_back(c + h * kGlX[i]);
    w.push_back(h * kGlW[i]);
  }
}

struct Fold {
  double hurst;
  double c2;
  double omega;

  double g(double v) const { return std::pow(v, 1.0 - 2.0 * hurst) / (1.0 + v * v); }
  double dg(double v) const {
    return g(v) * ((1.0 - 2.0 * hurst) / v - 2.0 * v / (1.0 + v * v));
  }
  // int_v^inf g
  double tail(double v) const {
    return c2 * boost::math::ibeta(hurst, 1.0 - hurst, 1.0 / (1.0 + v * v));
  }

  // sum over m in Z of g(|theta + omega m| / y)
  double operator()(double theta, double y) const {
    constexpr int kDirect = 16;
    double sum = theta > 0.0 ? g(theta / y) : 0.0;
    for (int m = 1; m <= kDirect; ++m) {
      sum += g((omega * m + theta) / y) + g((omega * m - theta) / y);
    }
    const double step = omega / y;
    for (double sign : {1.0, -1.0}) {
      const double v0 = (omega * (kDirect + 1) + sign * theta) / y;
      sum += tail(v0) / step + 0.5 * g(v0) - dg(v0) * step / 12.0;
    }
    return sum;
  }
};

}  // namespace

ConstructiveMesh build_constructive_mesh(const ModelParams& params, const Grid& grid,
                                         long nodes_eta, long nodes_y) {
  (void)ModelParams::make(params.hurst, params.gamma);
  if (nodes_eta < 32 || nodes_y < 32) throw DomainError("constructive mesh needs >= 32 nodes per axis");
  const ModelConstants c = constants_for(params);
  const double T = grid.horizon;
  const double big_theta = pi * grid.n;

  // theta rule: phase <= 3 per bulk panel, geometric grading below 1/T
  const long panels = nodes_eta / 8;
  const double theta_g = std::min(big_theta, 1.0 / T);
  const long bulk = big_theta > theta_g ? static_cast<long>(std::ceil((big_theta - theta_g) * T / 3.0)) : 0;
  const long graded = panels - bulk;
  if (graded < 6) {
    std::ostringstream os;
    os << "nodes_eta=" << nodes_eta << " is too small for n=" << grid.n << ", horizon " << T
       << " (needs at least " << 8 * (bulk + 6) << ")";
    throw AccuracyError(os.str(), 0.0, 1.0);
  }
  std::vector<double> theta{0.0}, wt{0.0};
  {
    constexpr double ratio = 0.3;
    double hi = theta_g * std::pow(ratio, static_cast<double>(graded - 1));
    add_panel(0.0, hi, theta, wt);
    for (long k = graded - 2; k >= 0; --k) {
      const double next = theta_g * std::pow(ratio, static_cast<double>(k));
      add_panel(hi, next, theta, wt);
      hi = next;
    }
    if (bulk > 0) {
      const double width = (big_theta - theta_g) / bulk;
      for (long b = 0; b < bulk; ++b) add_panel(theta_g + b * width, theta_g + (b + 1) * width, theta, wt);
    }
  }

  // y rule: log-trapezoid, truncated where the integrands fall below e^-18
  const double cut = 18.0;
  const double u_lo = -std::log(T) - cut / params.gamma;
  const double u_hi = std::log(static_cast<double>(grid.n)) + cut / params.alpha;
  const double h = (u_hi - u_lo) / (nodes_y - 1);
  std::vector<double> y(static_cast<std::size_t>(nodes_y)), wy(static_cast<std::size_t>(nodes_y));
  for (long k = 0; k < nodes_y; ++k) {
    y[static_cast<std::size_t>(k)] = std::exp(u_lo + k * h);
    wy[static_cast<std::size_t>(k)] = h * y[static_cast<std::size_t>(k)] * ((k == 0 || k == nodes_y - 1) ? 0.5 : 1.0);
  }

  ConstructiveMesh mesh;
  mesh.params = params;
  mesh.grid = grid;
  mesh.theta = theta;
  mesh.y = y;
  mesh.amp.resize(static_cast<Eigen::Index>(theta.size()), nodes_y);
  const Fold fold{params.hurst, c.c2, 2.0 * big_theta};
  const double P = c.spectral_prefactor;
  const double a = params.alpha;
  parallel_for(static_cast<std::size_t>(nodes_y), [&](std::size_t k) {
    const double yk = y[k];
    const double density = P * std::pow(yk, -a - 2.0);
    double seen = 0.0;
    for (std::size_t i = 1; i < theta.size(); ++i) {
      const double cell = density * fold(theta[i], yk) * wt[i];
      seen += cell;
      mesh.amp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = std::sqrt(cell * wy[k]);
    }
    const double total = P * c.c2 * std::pow(yk, -a - 1.0);
    mesh.amp(0, static_cast<Eigen::Index>(k)) = std::sqrt(std::max(0.0, total - seen) * wy[k]);
  });
  return mesh;
}

ConstructiveCovariance constructive_cov(const ConstructiveMesh& mesh, double s, double t) {
  const Eigen::Index nt = static_cast<Eigen::Index>(mesh.theta.size());
  const Eigen::Index ny = static_cast<Eigen::Index>(mesh.y.size());
  Eigen::VectorXd us(nt), ut(nt), vs(nt), vt(nt);
  for (Eigen::Index i = 0; i < nt; ++i) {
    const double th = mesh.theta[static_cast<std::size_t>(i)];
    us(i) = std::cos(th * s) - 1.0;
    ut(i) = std::cos(th * t) - 1.0;
    vs(i) = std::sin(th * s);
    vt(i) = std::sin(th * t);
  }
  Eigen::VectorXd ys(ny), yt(ny);
  for (Eigen::Index k = 0; k < ny; ++k) {
    ys(k) = -std::expm1(-mesh.y[static_cast<std::size_t>(k)] * s);
    yt(k) = -std::expm1(-mesh.y[static_cast<std::size_t>(k)] * t);
  }
  const Eigen::MatrixXd w = mesh.amp.array().square();
  const Eigen::VectorXd row_mass = w.rowwise().sum();
  ConstructiveCovariance r;
  r.u = us.dot(row_mass.cwiseProduct(ut));
  r.v = vs.dot(row_mass.cwiseProduct(vt));
  r.y = ys.dot(w.colwise().sum().transpose().cwiseProduct(yt));
  r.u_y = us.dot(w * yt);
  r.y_u = ut.dot(w * ys);
  r.x = r.u + r.v + r.y + r.u_y + r.y_u;
  return r;
}

double constructive_diagonal_error(const ConstructiveMesh& mesh) {
  const CovarianceKernel k = x_kernel(mesh.params);
  double worst = 0.0;
  for (std::size_t j = 1; j < mesh.grid.size(); ++j) {
    const double t = mesh.grid.times[j];
    worst = std::max(worst, std::abs(constructive_cov(mesh, t, t).x / k(t, t) - 1.0));
  }
  return worst;
}

PathSet sample_x_constructive(const ModelParams& params, const Grid& grid, SeedSpec seed,
                              long count, long nodes_eta, long nodes_y) {
  if (count < 1) throw DomainError("replication count must be >= 1");
  const ConstructiveMesh mesh = build_constructive_mesh(params, grid, nodes_eta, nodes_y);
  const double err = constructive_diagonal_error(mesh);
  if (err > 5e-3) {
    std::ostringstream os;
    os << "constructive mesh misses the variance of X by " << err << " (relative)";
    throw AccuracyError(os.str(), err, err);
  }
  const Eigen::Index nt = mesh.amp.rows();
  const Eigen::Index ny = mesh.amp.cols();
  const Eigen::Index m = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd ucos(m, nt), vsin(m, nt), yexp(m, ny);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double t = grid.times[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < nt; ++i) {
      const double th = mesh.theta[static_cast<std::size_t>(i)];
      ucos(j, i) = std::cos(th * t) - 1.0;
      vsin(j, i) = std::sin(th * t);
    }
    for (Eigen::Index k = 0; k < ny; ++k) yexp(j, k) = -std::expm1(-mesh.y[static_cast<std::size_t>(k)] * t);
  }
  const Eigen::VectorXd v_sd = mesh.amp.array().square().rowwise().sum().sqrt();
  PathSet out;
  out.grid = grid;
  out.label = "X[constructive]";
  out.values.resize(m, count);
  const std::uint64_t cells = static_cast<std::uint64_t>(nt * ny);
  parallel_for(static_cast<std::size_t>(count), [&](std::size_t r) {
    const NormalStream stream(seed.replica(r));
    Eigen::MatrixXd z(nt, ny);
    stream.fill(z.data(), cells);
    Eigen::VectorXd zv(nt);
    stream.fill(zv.data(), static_cast<std::uint64_t>(nt), cells);
    const Eigen::MatrixXd scaled = mesh.amp.cwiseProduct(z);
    const Eigen::VectorXd a = scaled.rowwise().sum();
    const Eigen::VectorXd b = scaled.colwise().sum().transpose();
    const Eigen::VectorXd vcoef = v_sd.cwiseProduct(zv);
    out.values.col(static_cast<Eigen::Index>(r)) = ucos * a + yexp * b + vsin * vcoef;
  });
  out.values.row(0).setZero();
  return out;
}

}  // namespace ssgp
