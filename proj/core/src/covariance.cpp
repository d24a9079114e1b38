#include "ssgp/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ssgp/errors.hpp"
#include "ssgp/eta_transform.hpp"
#include "ssgp/psi_table.hpp"

namespace ssgp {

namespace {

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time arguments must be finite and >= 0");
}

void check_times(double s, double t) {
  check_time(s);
  check_time(t);
}

double expm1_ratio(double x) { return std::abs(x) < 1e-8 ? 1.0 + 0.5 * x : std::expm1(x) / x; }

// Tight relative control: the reduced integrand is smooth and cheap.
const QuadratureSpec kReducedSpec{1e-300, 1e-13, 4000, 0.0, true};

double cross_reduced(const ModelParams& p, double t, double s) {
  const ModelConstants c = constants_for(p);
  const double x = t / s;
  const double lx = std::log(x);
  const double b1 = std::min(0.0, -lx);
  const double b2 = std::max(0.0, -lx);
  const double lo = b1 - 40.0 / (2.0 - p.gamma);
  const double hi = b2 + 40.0 / p.gamma;
  const double H = p.hurst;
  const double a = p.alpha;
  auto f = [&](double w) {
    const double eta = std::exp(w);
    return eta * spectral_weight(H, eta) * cosine_laplace_kernel(a, eta * x);
  };
  double total = integrate_finite(f, lo, b1, kReducedSpec).value;
  if (b2 > b1) total += integrate_finite(f, b1, b2, kReducedSpec).value;
  total += integrate_finite(f, b2, hi, kReducedSpec).value;
  return c.spectral_prefactor * std::pow(s, a) * gamma_fn(2.0 - a) / a * total;
}

double cross_nested(const ModelParams& p, double t, double s, const QuadratureSpec& spec) {
  const ModelConstants c = constants_for(p);
  const double a = p.alpha;
  const QuadratureSpec inner = spec.tightened(10.0);
  auto f = [&](double y) {
    return std::pow(y, -a - 1.0) * eta_transform(p.hurst, y * t, inner) * -std::expm1(-y * s);
  };
  const double scale = 1.0 / std::max(t, s);
  return c.spectral_prefactor *
         integrate_semi_infinite(f, p.gamma, Decay::power(a + 1.0), spec, scale).value;
}

double x_cov_spectral(const ModelParams& p, double s, double t, const QuadratureSpec& spec) {
  const ModelConstants c = constants_for(p);
  const double a = p.alpha;
  const double H = p.hurst;
  const double d = std::abs(t - s);
  const QuadratureSpec inner = spec.tightened(10.0);
  auto f = [&](double y) {
    const double et = std::exp(-y * t);
    const double es = std::exp(-y * s);
    const double bracket = eta_transform(H, y * d, inner) - eta_transform(H, y * t, inner) * es -
                           eta_transform(H, y * s, inner) * et +
                           c.c2 * std::expm1(-y * t) * std::expm1(-y * s);
    return std::pow(y, -a - 1.0) * bracket;
  };
  const double scale = 1.0 / std::max(t, s);
  return c.spectral_prefactor *
         integrate_semi_infinite(f, p.gamma - 1.0, Decay::power(a + 1.0), spec, scale).value;
}

// Integral of f over [0, len], the first half parameterized by the distance
// tau from the left end and the second half by the distance from the right end.
// Exact distances keep the endpoint singularities resolvable.
template <class Lo, class Hi>
double two_sided(double len, Lo&& near_lo, double p_lo, Hi&& near_hi, double p_hi,
                 const QuadratureSpec& spec) {
  if (!(len > 0.0)) return 0.0;
  const double h = 0.5 * len;
  return integrate_finite(near_lo, 0.0, h, spec, {p_lo, 0.0}).value +
         integrate_finite(near_hi, 0.0, h, spec, {p_hi, 0.0}).value;
}

double x_cov_timedomain(const ModelParams& p, double s, double t, const QuadratureSpec& spec) {
  const double H = p.hurst;
  const double g = p.gamma;
  const double e = 2.0 * H - 2.0;
  const double pe = std::min(e, -g);
  const QuadratureSpec inner_spec = spec.tightened(10.0);
  auto f = [&](double dist, double tu, double sv) {
    if (dist <= 0.0) return 0.0;
    return std::pow(dist, e) * std::pow(tu + sv, -g);
  };
  // int_0^t |u - v|^e (t - u + s - v)^-gamma du, with sv = s - v and tv = t - v exact
  auto inner = [&](double v, double sv, double tv) {
    if (tv > 0.0) {
      const double a = two_sided(
          v, [&](double x) { return f(v - x, t - x, sv); }, e,
          [&](double x) { return f(x, tv + x, sv); }, e, inner_spec);
      const double b = two_sided(
          tv, [&](double x) { return f(x, tv - x, sv); }, e,
          [&](double x) { return f(tv - x, x, sv); }, pe, inner_spec);
      return a + b;
    }
    return two_sided(
        t, [&](double x) { return f(v - x, t - x, sv); }, e,
        [&](double x) { return f(x - tv, x, sv); }, pe, inner_spec);
  };
  const double end_exp = std::min(p.alpha - 1.0, 1.0 - g);
  double total = 0.0;
  if (t < s) {
    total += two_sided(
        t, [&](double x) { return inner(x, s - x, t - x); }, 0.0,
        [&](double x) { return inner(t - x, (s - t) + x, x); }, 0.0, spec);
    total += two_sided(
        s - t, [&](double x) { return inner(t + x, (s - t) - x, -x); }, 0.0,
        [&](double x) { return inner(s - x, x, (t - s) + x); }, end_exp, spec);
  } else {
    total += two_sided(
        s, [&](double x) { return inner(x, s - x, t - x); }, 0.0,
        [&](double x) { return inner(s - x, x, (t - s) + x); }, end_exp, spec);
  }
  return H * (2.0 * H - 1.0) * total;
}

void check_params(const ModelParams& p) { (void)ModelParams::make(p.hurst, p.gamma); }

void check_method(const ModelParams& p, XMethod method) {
  check_params(p);
  if (method == XMethod::h_half && std::abs(p.hurst - 0.5) > 1e-12) {
    throw DomainError("h_half method requires H = 1/2");
  }
  if (method == XMethod::timedomain && !(p.hurst > 0.5 + 1e-6)) {
    throw DomainError("timedomain method requires H > 1/2");
  }
}

}  // namespace

XMethod parse_x_method(const std::string& name) {
  if (name == "decomposed") return XMethod::decomposed;
  if (name == "spectral") return XMethod::spectral;
  if (name == "timedomain") return XMethod::timedomain;
  if (name == "h_half") return XMethod::h_half;
  throw DomainError("unknown covariance method '" + name +
                    "' (expected decomposed, spectral, timedomain or h_half)");
}

std::string to_string(XMethod method) {
  switch (method) {
    case XMethod::decomposed: return "decomposed";
    case XMethod::spectral: return "spectral";
    case XMethod::timedomain: return "timedomain";
    case XMethod::h_half: return "h_half";
  }
  return "unknown";
}

double fbm_cov(double hurst, double s, double t) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("Hurst parameter must lie in (0,1)");
  check_times(s, t);
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(s, h2) + std::pow(t, h2) - std::pow(std::abs(t - s), h2));
}

double bifbm_cov(double hurst, double k, double s, double t) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("Hurst parameter must lie in (0,1)");
  if (!(k > 0.0 && k <= 1.0)) throw DomainError("bifractional index K must lie in (0,1]");
  check_times(s, t);
  const double h2 = 2.0 * hurst;
  return std::pow(2.0, -k) * (std::pow(std::pow(t, h2) + std::pow(s, h2), k) -
                              std::pow(std::abs(t - s), h2 * k));
}

double z_cov(double gamma, double s, double t) {
  check_times(s, t);
  if (!(gamma > 0.0)) throw DomainError("gamma must be > 0");
  if (s + t == 0.0) throw DomainError("Z covariance is singular at s = t = 0");
  return std::pow(s + t, -gamma);
}

double y_raw_integral(double alpha, double s, double t) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("alpha must lie in (0,2)");
  check_times(s, t);
  if (s == 0.0 || t == 0.0) return 0.0;
  const double d = alpha - 1.0;
  if (std::abs(d) < 0.25) {
    auto h = [d](double x) {
      const double lx = std::log(x);
      return x * lx * expm1_ratio(d * lx);
    };
    return -gamma_fn(2.0 - alpha) / alpha * (h(t) + h(s) - h(t + s));
  }
  return gamma_fn(1.0 - alpha) / alpha *
         (std::pow(t, alpha) + std::pow(s, alpha) - std::pow(t + s, alpha));
}

double y_cov(const ModelParams& params, double s, double t) {
  return constants_for(params).y_const * y_raw_integral(params.alpha, s, t);
}

double cross_cov_uy(const ModelParams& params, double t, double s, CrossMethod method,
                    const QuadratureSpec& spec) {
  check_params(params);
  check_times(s, t);
  if (t == 0.0 || s == 0.0) return 0.0;
  if (method == CrossMethod::nested) return cross_nested(params, t, s, spec);
  return cross_reduced(params, t, s);
}

double psi(const ModelParams& params, double x) { return cross_cov_uy(params, x, 1.0); }

QuadratureSpec default_x_cov_spec(XMethod method) {
  if (method == XMethod::timedomain) return {1e-9, 1e-8, 2000, 0.0, true};
  return QuadratureSpec::oscillatory();
}

double x_cov(const ModelParams& params, double s, double t, XMethod method) {
  return x_cov(params, s, t, method, default_x_cov_spec(method));
}

double x_cov(const ModelParams& params, double s, double t, XMethod method,
             const QuadratureSpec& spec) {
  check_method(params, method);
  check_times(s, t);
  if (s == 0.0 || t == 0.0) return 0.0;
  switch (method) {
    case XMethod::h_half: {
      const double e = 1.0 - params.gamma;
      return (std::pow(t + s, e) - std::pow(std::abs(t - s), e)) / (2.0 * e);
    }
    case XMethod::spectral: return x_cov_spectral(params, s, t, spec);
    case XMethod::timedomain: return x_cov_timedomain(params, s, t, spec);
    case XMethod::decomposed: break;
  }
  const ModelConstants c = constants_for(params);
  return c.kappa_star * fbm_cov(0.5 * params.alpha, s, t) + y_cov(params, s, t) +
         cross_reduced(params, t, s) + cross_reduced(params, s, t);
}

CovarianceKernel fbm_kernel(double hurst, double scale) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("Hurst parameter must lie in (0,1)");
  std::ostringstream os;
  os << "fbm(H=" << hurst << ")";
  if (scale != 1.0) os << "*" << scale;
  return {[hurst, scale](double s, double t) { return scale * fbm_cov(hurst, s, t); }, os.str(),
          true};
}

CovarianceKernel y_kernel(const ModelParams& params) {
  check_params(params);
  return {[params](double s, double t) { return y_cov(params, s, t); }, "Y", true};
}

CovarianceKernel cross_kernel(const ModelParams& params) {
  auto table = psi_table_for(params);
  return {[table](double t, double s) {
            check_times(s, t);
            if (t == 0.0 || s == 0.0) return 0.0;
            return std::pow(s, table->params().alpha) * (*table)(t / s);
          },
          "E[U_t Y_s]", false};
}

CovarianceKernel x_kernel(const ModelParams& params, XMethod method) {
  check_params(params);
  if (method != XMethod::decomposed) {
    check_method(params, method);
    return {[params, method](double s, double t) { return x_cov(params, s, t, method); },
            "X[" + to_string(method) + "]", true};
  }
  auto table = psi_table_for(params);
  const ModelConstants c = constants_for(params);
  const double a = params.alpha;
  const double y_scale = c.y_const;
  const double ks = c.kappa_star;
  return {[table, a, y_scale, ks](double s, double t) {
            check_times(s, t);
            if (s == 0.0 || t == 0.0) return 0.0;
            const double w = ks * fbm_cov(0.5 * a, s, t);
            const double y = y_scale * y_raw_integral(a, s, t);
            const double cr = std::pow(s, a) * (*table)(t / s) + std::pow(t, a) * (*table)(s / t);
            return w + y + cr;
          },
          "X", true};
}

double increment_cov(const CovarianceKernel& kernel, long n, long j, long k) {
  if (n < 1) throw DomainError("grid density n must be >= 1");
  if (j < 0 || k < 0) throw DomainError("increment indices must be >= 0");
  const double dn = static_cast<double>(n);
  const double t0 = j / dn, t1 = (j + 1) / dn;
  const double s0 = k / dn, s1 = (k + 1) / dn;
  return kernel(t1, s1) - kernel(t1, s0) - kernel(t0, s1) + kernel(t0, s0);
}

IncrementStats increment_stats(const CovarianceKernel& kernel, long n, long j, long k) {
  IncrementStats st;
  st.n = n;
  st.j = j;
  st.k = k;
  st.cov = increment_cov(kernel, n, j, k);
  const double vj = increment_cov(kernel, n, j, j);
  const double vk = j == k ? vj : increment_cov(kernel, n, k, k);
  if (!(vj > 0.0)) {
    std::ostringstream os;
    os << "increment " << j << " at n=" << n << " has non-positive variance " << vj;
    throw DegeneracyError(os.str(), n, j);
  }
  if (!(vk > 0.0)) {
    std::ostringstream os;
    os << "increment " << k << " at n=" << n << " has non-positive variance " << vk;
    throw DegeneracyError(os.str(), n, k);
  }
  st.beta_j = std::sqrt(vj);
  st.beta_k = std::sqrt(vk);
  st.rho = std::clamp(st.cov / (st.beta_j * st.beta_k), -1.0, 1.0);
  return st;
}

double w_increment_cov(const ModelParams& params, long n, long j, long k) {
  check_params(params);
  if (n < 1) throw DomainError("grid density n must be >= 1");
  const ModelConstants c = constants_for(params);
  const double a = params.alpha;
  return 0.5 * c.kappa_star * std::pow(static_cast<double>(n), -a) *
         power_second_difference(a, static_cast<double>(j - k));
}

double y_increment_cov(const ModelParams& params, long n, long j, long k) {
  check_params(params);
  if (n < 1) throw DomainError("grid density n must be >= 1");
  if (j < 0 || k < 0) throw DomainError("increment indices must be >= 0");
  const ModelConstants c = constants_for(params);
  const double a = params.alpha;
  // only the -(t+s)^alpha part of the closed form survives both differences
  const double m = static_cast<double>(j + k + 1);
  return c.y_const * gamma_fn(2.0 - a) / a * std::pow(static_cast<double>(n), -a) *
         power_second_difference_over_em1(a, m);
}

double uy_increment_cov(const ModelParams& params, long n, long j, long k) {
  return increment_cov(cross_kernel(params), n, j, k);
}

double x_increment_cov(const ModelParams& params, long n, long j, long k) {
  const CovarianceKernel cross = cross_kernel(params);
  return w_increment_cov(params, n, j, k) + y_increment_cov(params, n, j, k) +
         increment_cov(cross, n, j, k) + increment_cov(cross, n, k, j);
}

BoundRatios lemma_bound_ratios(const ModelParams& params, long n, long j, long k) {
  check_params(params);
  if (n < 1) throw DomainError("grid density n must be >= 1");
  if (j < 0 || k < 0) throw DomainError("increment indices must be >= 0");
  if (j + k < 1) throw DomainError("lemma_bound_ratios needs j + k >= 1");
  const double a = params.alpha;
  const double na = std::pow(static_cast<double>(n), -a);
  BoundRatios r;
  r.ratio_yy = std::abs(y_increment_cov(params, n, j, k)) /
               (na * std::pow(static_cast<double>(j + k), a - 2.0));
  if (j >= 1 && k >= 1) {
    r.ratio_wy = std::abs(uy_increment_cov(params, n, j, k)) /
                 (na * std::pow(static_cast<double>(j), 2.0 * params.hurst - 2.0) *
                  std::pow(static_cast<double>(k), -params.gamma));
  } else {
    r.ratio_wy = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

}  // namespace ssgp
