#include "ssgp/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>

#include "ssgp/errors.hpp"
#include "ssgp/parallel.hpp"
#include "ssgp/sampling.hpp"
#include "ssgp/variations.hpp"

namespace ssgp {

namespace {

// NaN and infinities have no JSON spelling; they become null.
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json params_json(const ModelParams& p) {
  return Json{{"hurst", p.hurst}, {"gamma", p.gamma}, {"alpha", p.alpha}};
}

void reject_unknown(const Json& doc, const std::set<std::string>& known, const std::string& where) {
  if (!doc.is_object()) throw DomainError(where + " must be a JSON object");
  for (const auto& item : doc.items())
    if (!known.count(item.key())) throw DomainError("unknown key '" + item.key() + "' in " + where);
}

template <class T>
T get_as(const Json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DomainError(std::string("config key '") + key + "' has the wrong type");
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Json to_json(const QuadratureSpec& spec) {
  return Json{{"abs_tol", spec.abs_tol},
              {"rel_tol", spec.rel_tol},
              {"max_subdivisions", spec.max_subdivisions},
              {"tail_cut", spec.tail_cut},
              {"strict", spec.strict}};
}

QuadratureSpec quadrature_spec_from_json(const Json& doc, QuadratureSpec base) {
  reject_unknown(doc, {"abs_tol", "rel_tol", "max_subdivisions", "tail_cut", "strict"},
                 "tolerances");
  base.abs_tol = get_as(doc, "abs_tol", base.abs_tol);
  base.rel_tol = get_as(doc, "rel_tol", base.rel_tol);
  base.max_subdivisions = get_as(doc, "max_subdivisions", base.max_subdivisions);
  base.tail_cut = get_as(doc, "tail_cut", base.tail_cut);
  base.strict = get_as(doc, "strict", base.strict);
  base.validate();
  return base;
}

void ExperimentConfig::validate() const {
  ModelParams::make(params.hurst, params.gamma);
  if (q < 1) throw DomainError("q must be >= 1");
  if (n < 2) throw DomainError("n must be >= 2");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be > 0");
  if (replications < 1) throw DomainError("replications must be >= 1");
  tolerances.validate();
}

Json ExperimentConfig::to_json() const {
  return Json{{"params", Json{{"hurst", params.hurst}, {"gamma", params.gamma}}},
              {"q", q},
              {"n", n},
              {"horizon", horizon},
              {"replications", replications},
              {"master_seed", master_seed},
              {"tolerances", ssgp::to_json(tolerances)},
              {"output_dir", output_dir}};
}

ExperimentConfig ExperimentConfig::from_json(const Json& doc) {
  reject_unknown(doc,
                 {"params", "q", "n", "horizon", "replications", "master_seed", "tolerances",
                  "output_dir"},
                 "config");
  ExperimentConfig c;
  if (doc.contains("params")) {
    const Json& p = doc.at("params");
    reject_unknown(p, {"hurst", "gamma", "alpha"}, "params");
    c.params = ModelParams::make(get_as(p, "hurst", c.params.hurst),
                                 get_as(p, "gamma", c.params.gamma));
    if (p.contains("alpha") && std::abs(get_as(p, "alpha", 0.0) - c.params.alpha) > 1e-12)
      throw DomainError("params.alpha must equal 2 hurst - gamma");
  }
  c.q = get_as(doc, "q", c.q);
  c.n = get_as(doc, "n", c.n);
  c.horizon = get_as(doc, "horizon", c.horizon);
  c.replications = get_as(doc, "replications", c.replications);
  if (doc.contains("master_seed")) {
    const Json& s = doc.at("master_seed");
    if (!s.is_number_unsigned())
      throw DomainError("master_seed must be a nonnegative integer");
    c.master_seed = s.get<std::uint64_t>();
  }
  if (doc.contains("tolerances"))
    c.tolerances = quadrature_spec_from_json(doc.at("tolerances"), c.tolerances);
  c.output_dir = get_as(doc, "output_dir", c.output_dir);
  c.validate();
  return c;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.to_json() == b.to_json();
}

// Decomposition check --------------------------------------------------------

XMethod default_reference(const ModelParams& params) {
  if (params.hurst == 0.5) return XMethod::h_half;
  return params.hurst > 0.5 ? XMethod::timedomain : XMethod::spectral;
}

std::string DecompositionReport::kappa_consistent() const {
  const bool star = max_deviation <= closure_tol;
  const bool paper = max_deviation_kappa_paper <= closure_tol;
  return star ? (paper ? "both" : "kappa_star") : (paper ? "kappa_paper" : "neither");
}

std::string DecompositionReport::lambda_consistent() const {
  const bool yc = max_deviation <= closure_tol;
  const bool paper = max_deviation_lambda1_paper <= closure_tol;
  return yc ? (paper ? "both" : "y_const") : (paper ? "lambda1_paper" : "neither");
}

Json DecompositionReport::to_json() const {
  Json pts = Json::array();
  for (const auto& p : points) {
    Json e{{"s", p.s}, {"t", p.t}};
    if (p.error.empty()) {
      e["reference"] = p.reference;
      e["decomposed"] = p.decomposed;
      e["deviation"] = p.deviation;
    } else {
      e["error"] = p.error;
    }
    pts.push_back(std::move(e));
  }
  return Json{{"schema_version", kReportSchemaVersion},
              {"kind", "decomposition_check"},
              {"params", params_json(params)},
              {"reference_method", to_string(reference)},
              {"grid", Json{{"points", grid.points}, {"hi", grid.hi}}},
              {"closure_tol", closure_tol},
              {"max_deviation", number(max_deviation)},
              {"failures", failures},
              {"kappa",
               Json{{"kappa_paper", kappa_paper},
                    {"kappa_star", kappa_star},
                    {"max_deviation_kappa_paper", number(max_deviation_kappa_paper)},
                    {"max_deviation_kappa_star", number(max_deviation)},
                    {"consistent", kappa_consistent()}}},
              {"smooth_scale",
               Json{{"lambda1_paper", lambda1_paper},
                    {"y_const", y_const},
                    {"max_deviation_lambda1_paper", number(max_deviation_lambda1_paper)},
                    {"max_deviation_y_const", number(max_deviation)},
                    {"consistent", lambda_consistent()}}},
              {"points", std::move(pts)}};
}

DecompositionReport run_decomposition_check(const ModelParams& params, XMethod reference,
                                            const DecompositionGridSpec& grid,
                                            const std::optional<QuadratureSpec>& tolerances,
                                            double closure_tol) {
  ModelParams::make(params.hurst, params.gamma);
  if (grid.points < 1) throw DomainError("decomposition grid needs at least one point per axis");
  if (!(grid.hi > 0.0)) throw DomainError("decomposition grid upper end must be > 0");
  if (reference == XMethod::decomposed)
    throw DomainError("the reference route must differ from the decomposed one");
  if (reference == XMethod::h_half && params.hurst != 0.5)
    throw DomainError("the h_half reference needs H = 1/2");
  const QuadratureSpec spec = tolerances ? *tolerances : default_x_cov_spec(reference);
  spec.validate();

  const ModelConstants c = constants_for(params);
  DecompositionReport rep;
  rep.params = params;
  rep.reference = reference;
  rep.grid = grid;
  rep.closure_tol = closure_tol;
  rep.kappa_paper = c.kappa_paper;
  rep.kappa_star = c.kappa_star;
  rep.y_const = c.y_const;
  rep.lambda1_paper = c.lambda1_paper;

  const std::size_t m = static_cast<std::size_t>(grid.points);
  rep.points.resize(m * m);
  std::vector<double> dev_kp(m * m, 0.0), dev_lp(m * m, 0.0);
  const CovarianceKernel decomposed = x_kernel(params, XMethod::decomposed);
  parallel_for(m * m, [&](std::size_t idx) {
    DecompositionPoint& pt = rep.points[idx];
    pt.s = grid.hi * static_cast<double>(idx / m + 1) / static_cast<double>(m);
    pt.t = grid.hi * static_cast<double>(idx % m + 1) / static_cast<double>(m);
    try {
      pt.reference = x_cov(params, pt.s, pt.t, reference, spec);
      pt.decomposed = decomposed(pt.s, pt.t);
      pt.deviation = std::abs(pt.reference - pt.decomposed);
      const double w = fbm_cov(0.5 * params.alpha, pt.s, pt.t);
      const double y = y_cov(params, pt.s, pt.t);
      dev_kp[idx] = std::abs(pt.reference - (pt.decomposed + (c.kappa_paper - c.kappa_star) * w));
      dev_lp[idx] = std::abs(pt.reference -
                             (pt.decomposed + (c.lambda1_paper / c.y_const - 1.0) * y));
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
  });
  for (std::size_t i = 0; i < m * m; ++i) {
    if (!rep.points[i].error.empty()) {
      ++rep.failures;
      continue;
    }
    rep.max_deviation = std::max(rep.max_deviation, rep.points[i].deviation);
    rep.max_deviation_kappa_paper = std::max(rep.max_deviation_kappa_paper, dev_kp[i]);
    rep.max_deviation_lambda1_paper = std::max(rep.max_deviation_lambda1_paper, dev_lp[i]);
  }
  if (rep.failures == static_cast<long>(m * m)) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rep.max_deviation = rep.max_deviation_kappa_paper = rep.max_deviation_lambda1_paper = nan;
  }
  return rep;
}

// Monte Carlo CLT ------------------------------------------------------------

Json ExperimentReport::to_json() const {
  return Json{{"schema_version", kReportSchemaVersion},
              {"kind", "clt_experiment"},
              {"config", config.to_json()},
              {"alpha", config.params.alpha},
              {"samples", samples},
              {"sample_mean", moments.mean},
              {"sample_variance", moments.variance},
              {"skewness", moments.skewness},
              {"excess_kurtosis", moments.excess_kurtosis},
              {"ks_statistic", ks_statistic},
              {"ks_p_value", ks_p_value},
              {"exact_variance", exact_variance},
              {"sigma_sq_limit", sigma_sq_limit},
              {"asymptotic_variance", asymptotic_variance},
              {"variance_ratio", moments.variance / exact_variance},
              {"sampler_jitter", sampler_jitter}};
}

ExperimentReport run_clt_experiment(const ExperimentConfig& config) {
  config.validate();
  check_clt_hypothesis(config.params.alpha, config.q);
  const auto t0 = std::chrono::steady_clock::now();

  ExperimentReport rep;
  rep.config = config;
  const Grid grid = Grid::make(config.n, config.horizon);
  const long increments = grid.index_at(config.horizon);
  if (increments < 1) throw DomainError("horizon holds no complete increment");

  const std::vector<double> betas = exact_betas(config.params, config.n, increments);
  rep.exact_variance =
      exact_variation_variance(config.params, config.q, config.n, config.horizon);
  rep.sigma_sq_limit = breuer_major_sigma2(config.params.alpha, config.q).sigma_sq;
  rep.asymptotic_variance = rep.sigma_sq_limit * config.horizon;

  const CovarianceKernel kernel = x_kernel(config.params);
  const PathSet paths =
      sample_gaussian_paths(kernel, grid, SeedSpec{config.master_seed, 0}, config.replications);
  rep.values.assign(static_cast<std::size_t>(config.replications), 0.0);
  parallel_for(rep.values.size(), [&](std::size_t r) {
    rep.values[r] =
        hermite_variation(paths.path(static_cast<long>(r)), betas, config.q, config.horizon)
            .final_value();
  });

  rep.samples = static_cast<long>(rep.values.size());
  const StatTestResult st = stat_tests(rep.values, rep.exact_variance);
  rep.moments = st.moments;
  rep.ks_statistic = st.ks.statistic;
  rep.ks_p_value = st.ks.p_value;
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

void write_clt_samples_csv(std::ostream& out, const ExperimentReport& report) {
  std::vector<std::vector<double>> rows;
  rows.reserve(report.values.size());
  for (std::size_t r = 0; r < report.values.size(); ++r)
    rows.push_back({static_cast<double>(r), report.values[r]});
  const ExperimentConfig& c = report.config;
  write_csv_table(out, "ssgp.clt_samples/1",
                  {{"hurst", format_double(c.params.hurst)},
                   {"gamma", format_double(c.params.gamma)},
                   {"q", std::to_string(c.q)},
                   {"n", std::to_string(c.n)},
                   {"horizon", format_double(c.horizon)},
                   {"master_seed", std::to_string(c.master_seed)}},
                  {"replication", "F_n"}, rows);
}

void write_clt_outputs(const ExperimentReport& report) {
  const std::filesystem::path dir(report.config.output_dir);
  ensure_directory(dir);
  {
    std::ofstream out(dir / "clt_samples.csv", std::ios::binary);
    if (!out) throw ResourceError("cannot write " + (dir / "clt_samples.csv").string());
    write_clt_samples_csv(out, report);
  }
  write_json_file(dir / "clt_report.json", report.to_json());
}

// Variance convergence -------------------------------------------------------

bool ConvergenceTable::gaps_strictly_decreasing() const {
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].gap < rows[i - 1].gap)) return false;
  return !rows.empty();
}

void ConvergenceTable::write_csv(std::ostream& out) const {
  std::vector<std::vector<double>> body;
  for (const auto& r : rows) body.push_back({static_cast<double>(r.n), r.variance, r.gap});
  write_csv_table(out, "ssgp.convergence/1",
                  {{"hurst", format_double(params.hurst)},
                   {"gamma", format_double(params.gamma)},
                   {"q", std::to_string(q)},
                   {"horizon", format_double(horizon)},
                   {"mode", fbm_only ? "fbm_only" : "full"},
                   {"sigma_sq", format_double(sigma_sq)}},
                  {"n", "variance", "gap"}, body);
}

Json ConvergenceTable::to_json() const {
  Json r = Json::array();
  for (const auto& row : rows)
    r.push_back(Json{{"n", row.n}, {"variance", row.variance}, {"gap", row.gap}});
  return Json{{"schema_version", kReportSchemaVersion},
              {"kind", "variance_convergence"},
              {"params", params_json(params)},
              {"q", q},
              {"horizon", horizon},
              {"mode", fbm_only ? "fbm_only" : "full"},
              {"sigma_sq", sigma_sq},
              {"gaps_strictly_decreasing", gaps_strictly_decreasing()},
              {"rows", std::move(r)}};
}

ConvergenceTable run_variance_convergence(const ModelParams& params, int q,
                                          const std::vector<long>& ns, double horizon,
                                          bool fbm_only) {
  check_clt_hypothesis(params.alpha, q);
  if (!(horizon > 0.0)) throw DomainError("horizon must be > 0");
  for (long n : ns)
    if (n < 2) throw DomainError("every n must be >= 2");
  ConvergenceTable tab;
  tab.params = params;
  tab.q = q;
  tab.horizon = horizon;
  tab.fbm_only = fbm_only;
  tab.sigma_sq = breuer_major_sigma2(params.alpha, q).sigma_sq;
  const CovarianceKernel fbm = fbm_kernel(0.5 * params.alpha, constants_for(params).kappa_star);
  for (long n : ns) {
    const double v = fbm_only ? exact_variation_variance(fbm, q, n, horizon)
                              : exact_variation_variance(params, q, n, horizon);
    ConvergenceRow row;
    row.n = n;
    row.variance = v / horizon;
    row.gap = std::abs(row.variance - tab.sigma_sq);
    tab.rows.push_back(row);
  }
  return tab;
}

// Lemma bound ratios ----------------------------------------------------------

double BoundTable::growth_yy() const {
  if (rows.empty()) throw DomainError("empty bound table");
  return rows.back().max_ratio_yy / rows.front().max_ratio_yy;
}

double BoundTable::growth_wy() const {
  if (rows.empty()) throw DomainError("empty bound table");
  return rows.back().max_ratio_wy / rows.front().max_ratio_wy;
}

void BoundTable::write_csv(std::ostream& out) const {
  std::vector<std::vector<double>> body;
  for (const auto& r : rows)
    body.push_back({static_cast<double>(r.n), static_cast<double>(r.cap), r.max_ratio_yy,
                    r.max_ratio_wy, r.min_ratio_yy, r.min_ratio_wy});
  write_csv_table(out, "ssgp.bounds/1",
                  {{"hurst", format_double(params.hurst)}, {"gamma", format_double(params.gamma)}},
                  {"n", "cap", "max_ratio_yy", "max_ratio_wy", "min_ratio_yy", "min_ratio_wy"},
                  body);
}

Json BoundTable::to_json() const {
  Json r = Json::array();
  for (const auto& row : rows)
    r.push_back(Json{{"n", row.n},
                     {"cap", row.cap},
                     {"max_ratio_yy", row.max_ratio_yy},
                     {"max_ratio_wy", row.max_ratio_wy},
                     {"min_ratio_yy", row.min_ratio_yy},
                     {"min_ratio_wy", row.min_ratio_wy}});
  Json doc{{"schema_version", kReportSchemaVersion},
           {"kind", "bound_check"},
           {"params", params_json(params)},
           {"rows", std::move(r)}};
  if (!rows.empty()) {
    doc["growth_yy"] = number(growth_yy());
    doc["growth_wy"] = number(growth_wy());
  }
  return doc;
}

BoundTable run_bound_check(const ModelParams& params, const std::vector<long>& ns, long cap) {
  ModelParams::make(params.hurst, params.gamma);
  if (ns.empty()) throw DomainError("bound check needs at least one n");
  BoundTable tab;
  tab.params = params;
  for (long n : ns) {
    if (n < 1) throw DomainError("every n must be >= 1");
    const long c = cap > 0 ? std::min(cap, n) : n;
    const std::size_t cs = static_cast<std::size_t>(c);
    std::vector<BoundRow> per_j(cs);
    parallel_for(cs, [&](std::size_t jj) {
      const long j = static_cast<long>(jj) + 1;
      BoundRow& b = per_j[jj];
      b.min_ratio_yy = b.min_ratio_wy = std::numeric_limits<double>::infinity();
      for (long k = 1; k <= c; ++k) {
        const BoundRatios r = lemma_bound_ratios(params, n, j, k);
        b.max_ratio_yy = std::max(b.max_ratio_yy, r.ratio_yy);
        b.max_ratio_wy = std::max(b.max_ratio_wy, r.ratio_wy);
        b.min_ratio_yy = std::min(b.min_ratio_yy, r.ratio_yy);
        b.min_ratio_wy = std::min(b.min_ratio_wy, r.ratio_wy);
      }
    });
    BoundRow row;
    row.n = n;
    row.cap = c;
    row.min_ratio_yy = row.min_ratio_wy = std::numeric_limits<double>::infinity();
    for (const auto& b : per_j) {
      row.max_ratio_yy = std::max(row.max_ratio_yy, b.max_ratio_yy);
      row.max_ratio_wy = std::max(row.max_ratio_wy, b.max_ratio_wy);
      row.min_ratio_yy = std::min(row.min_ratio_yy, b.min_ratio_yy);
      row.min_ratio_wy = std::min(row.min_ratio_wy, b.min_ratio_wy);
    }
    tab.rows.push_back(row);
  }
  return tab;
}

// psi growth ------------------------------------------------------------------

double PsiBoundTable::max_relative_change() const {
  double worst = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    worst = std::max(worst, std::abs(rows[i].sup_ratio / rows[i - 1].sup_ratio - 1.0));
    worst = std::max(worst,
                     std::abs(rows[i].sup_slope_ratio / rows[i - 1].sup_slope_ratio - 1.0));
  }
  return worst;
}

void PsiBoundTable::write_csv(std::ostream& out) const {
  std::vector<std::vector<double>> body;
  for (const auto& r : rows)
    body.push_back({static_cast<double>(r.points_per_octave), r.sup_ratio, r.sup_slope_ratio});
  write_csv_table(out, "ssgp.psi_bounds/1",
                  {{"hurst", format_double(params.hurst)},
                   {"gamma", format_double(params.gamma)},
                   {"x_lo", format_double(lo)},
                   {"x_hi", format_double(hi)}},
                  {"points_per_octave", "sup_ratio", "sup_slope_ratio"}, body);
}

Json PsiBoundTable::to_json() const {
  Json r = Json::array();
  for (const auto& row : rows)
    r.push_back(Json{{"points_per_octave", row.points_per_octave},
                     {"sup_ratio", row.sup_ratio},
                     {"sup_slope_ratio", row.sup_slope_ratio}});
  return Json{{"schema_version", kReportSchemaVersion},
              {"kind", "psi_bounds"},
              {"params", params_json(params)},
              {"x_lo", lo},
              {"x_hi", hi},
              {"max_relative_change", max_relative_change()},
              {"rows", std::move(r)}};
}

PsiBoundTable run_psi_bound_check(const ModelParams& params,
                                  const std::vector<int>& points_per_octave, int lo_exp,
                                  int hi_exp) {
  ModelParams::make(params.hurst, params.gamma);
  if (hi_exp <= lo_exp) throw DomainError("psi range must have lo_exp < hi_exp");
  PsiBoundTable tab;
  tab.params = params;
  tab.lo = std::ldexp(1.0, lo_exp);
  tab.hi = std::ldexp(1.0, hi_exp);
  const double e1 = 2.0 * params.hurst - 1.0;
  for (int ppo : points_per_octave) {
    if (ppo < 1) throw DomainError("points per octave must be >= 1");
    const std::size_t count = static_cast<std::size_t>(ppo) * (hi_exp - lo_exp) + 1;
    std::vector<double> x(count), v(count);
    parallel_for(count, [&](std::size_t i) {
      x[i] = std::exp2(lo_exp + static_cast<double>(i) / ppo);
      v[i] = psi(params, x[i]);
    });
    PsiBoundRow row;
    row.points_per_octave = ppo;
    for (std::size_t i = 0; i < count; ++i) {
      row.sup_ratio = std::max(row.sup_ratio, std::abs(v[i]) / std::pow(x[i], e1));
      if (i == 0) continue;
      const double slope = (v[i] - v[i - 1]) / (x[i] - x[i - 1]);
      const double mid = std::sqrt(x[i] * x[i - 1]);
      row.sup_slope_ratio = std::max(row.sup_slope_ratio, std::abs(slope) / std::pow(mid, e1 - 1.0));
    }
    tab.rows.push_back(row);
  }
  return tab;
}

}  // namespace ssgp
