#include "cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ssgp/constructive.hpp"
#include "ssgp/errors.hpp"
#include "ssgp/harness.hpp"
#include "ssgp/io.hpp"
#include "ssgp/sampling.hpp"
#include "ssgp/variations.hpp"

namespace ssgp::cli {

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
};

struct ModelOptions {
  std::optional<double> hurst;
  std::optional<double> gamma;
  std::optional<int> q;
  std::optional<long> n;
  std::optional<double> horizon;
  std::optional<long> replications;

  void attach(CLI::App* app, bool with_q, bool with_grid, bool with_reps) {
    app->add_option("--H", hurst, "Hurst index of the driving fBm");
    app->add_option("--gamma", gamma, "exponent of the auxiliary kernel");
    if (with_q) app->add_option("--q", q, "Hermite rank");
    if (with_grid) {
      app->add_option("--n", n, "grid density (points per unit time)");
      app->add_option("--T", horizon, "time horizon");
    }
    if (with_reps) app->add_option("--M", replications, "number of replications");
  }
};

// Shortest representation that reads back to the same double, keeping a
// decimal point so that integers print as "2.0".
std::string shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".einf") == std::string::npos) s += ".0";
  return s;
}

std::string fixed_digits(double x, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

ExperimentConfig resolve(const Globals& g, const ModelOptions& m) {
  ExperimentConfig c = g.config.empty() ? ExperimentConfig{}
                                        : ExperimentConfig::from_json(read_json_file(g.config));
  if (m.hurst || m.gamma)
    c.params = ModelParams::make(m.hurst.value_or(c.params.hurst), m.gamma.value_or(c.params.gamma));
  if (m.q) c.q = *m.q;
  if (m.n) c.n = *m.n;
  if (m.horizon) c.horizon = *m.horizon;
  if (m.replications) c.replications = *m.replications;
  if (g.seed) c.master_seed = *g.seed;
  if (!g.out.empty()) c.output_dir = g.out;
  c.validate();
  return c;
}

// Writes to <out>/<stem>.<ext> when --out is given, otherwise to `out`.
class Sink {
 public:
  Sink(const Globals& g, std::ostream& out, const std::string& stem, const std::string& ext)
      : out_(out) {
    if (!g.out.empty()) {
      ensure_directory(g.out);
      path_ = std::filesystem::path(g.out) / (stem + "." + ext);
      file_.open(path_, std::ios::binary);
      if (!file_) throw ResourceError("cannot write " + path_.string());
    }
  }
  std::ostream& stream() { return path_.empty() ? out_ : file_; }
  void finish() {
    if (path_.empty()) return;
    file_.close();
    if (!file_) throw ResourceError("write to " + path_.string() + " failed");
    out_ << "wrote " << path_.string() << '\n';
  }

 private:
  std::ostream& out_;
  std::filesystem::path path_;
  std::ofstream file_;
};

void emit_json(const Globals& g, std::ostream& out, const std::string& stem, const Json& doc) {
  Sink sink(g, out, stem, "json");
  sink.stream() << doc.dump(2) << '\n';
  sink.finish();
}

template <class Table>
void emit_table(const Globals& g, std::ostream& out, const std::string& stem, const Table& tab) {
  if (g.format == "json") {
    emit_json(g, out, stem, tab.to_json());
    return;
  }
  Sink sink(g, out, stem, "csv");
  tab.write_csv(sink.stream());
  sink.finish();
}

void emit_paths(const Globals& g, std::ostream& out, const std::string& stem, const PathSet& paths,
                const std::string& meta) {
  if (g.format == "json") {
    Json cols = Json::array();
    for (long r = 0; r < paths.count(); ++r) {
      const Eigen::VectorXd c = paths.values.col(r);
      cols.push_back(std::vector<double>(c.data(), c.data() + c.size()));
    }
    emit_json(g, out, stem,
              Json{{"schema_version", kReportSchemaVersion},
                   {"kind", "paths"},
                   {"label", paths.label},
                   {"n", paths.grid.n},
                   {"horizon", paths.grid.horizon},
                   {"times", paths.grid.times},
                   {"paths", std::move(cols)}});
    return;
  }
  Sink sink(g, out, stem, "csv");
  write_paths_csv(sink.stream(), paths, meta);
  sink.finish();
}

std::vector<long> parse_list(const std::string& text) {
  std::vector<long> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stol(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError("not an integer list: " + text);
    }
  }
  if (v.empty()) throw DomainError("empty integer list");
  return v;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Self-similar Gaussian processes: covariance, simulation and Hermite variations",
               "ssgp"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "JSON experiment config");
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  // cov
  auto* cov = app.add_subcommand("cov", "evaluate the covariance R(s,t)");
  ModelOptions cov_m;
  cov_m.attach(cov, false, false, false);
  double cov_s = 1.0, cov_t = 1.0;
  std::string cov_method = "decomposed";
  int cov_digits = 8;
  cov->add_option("--s", cov_s, "first time")->required();
  cov->add_option("--t", cov_t, "second time")->required();
  cov->add_option("--method", cov_method, "decomposed, spectral, timedomain or h_half");
  cov->add_option("--digits", cov_digits, "significant digits printed")->check(CLI::Range(1, 17));

  // check-decomposition
  auto* dec = app.add_subcommand("check-decomposition",
                                 "compare the decomposed covariance with an independent route");
  ModelOptions dec_m;
  dec_m.attach(dec, false, false, false);
  DecompositionGridSpec dec_grid;
  std::string dec_ref = "auto";
  double dec_tol = 1e-6;
  dec->add_option("--points", dec_grid.points, "grid points per axis");
  dec->add_option("--hi", dec_grid.hi, "upper end of the grid");
  dec->add_option("--reference", dec_ref, "auto, spectral, timedomain or h_half");
  dec->add_option("--closure-tol", dec_tol, "deviation below which a constant closes");

  // simulate
  auto* sim = app.add_subcommand("simulate", "simulate sample paths");
  ModelOptions sim_m;
  sim_m.attach(sim, false, true, true);
  std::string sim_method = "exact";
  std::string sim_fbm = "cholesky";
  sim->add_option("--method", sim_method, "exact, constructive, fbm or y")
      ->check(CLI::IsMember({"exact", "constructive", "fbm", "y"}));
  sim->add_option("--fbm-method", sim_fbm, "cholesky or circulant")
      ->check(CLI::IsMember({"cholesky", "circulant"}));

  // hermvar
  auto* hv = app.add_subcommand("hermvar", "Hermite variation F_n(t) along one exact path");
  ModelOptions hv_m;
  hv_m.attach(hv, true, true, false);
  long hv_path = 0;
  hv->add_option("--path", hv_path, "replication (stream id) of the path")->check(CLI::NonNegativeNumber);

  // sigma2
  auto* s2 = app.add_subcommand("sigma2", "Breuer-Major limit variance");
  double s2_alpha = 1.0;
  int s2_q = 2;
  double s2_tol = 1e-12;
  std::optional<long> s2_cut;
  s2->add_option("--alpha", s2_alpha, "self-similarity exponent alpha")->required();
  s2->add_option("--q", s2_q, "Hermite rank")->required();
  s2->add_option("--tol", s2_tol, "target tail bound");
  s2->add_option("--truncation", s2_cut, "fixed direct-sum cut M");

  // clt
  auto* clt = app.add_subcommand("clt", "Monte Carlo check of the Hermite variation CLT");
  ModelOptions clt_m;
  clt_m.attach(clt, true, true, true);

  // converge
  auto* cv = app.add_subcommand("converge", "finite-n variance against the limit");
  ModelOptions cv_m;
  cv_m.attach(cv, true, false, false);
  std::string cv_ns = "256,1024,4096";
  bool cv_fbm = false;
  cv->add_option("--ns", cv_ns, "comma separated grid densities");
  cv->add_option("--T", cv_m.horizon, "time horizon");
  cv->add_flag("--fbm-only", cv_fbm, "use kappa_star times an fBm of index alpha/2");

  // bounds
  auto* bd = app.add_subcommand("bounds", "increment bound ratios");
  ModelOptions bd_m;
  bd_m.attach(bd, false, false, false);
  std::string bd_ns = "16,64,256";
  long bd_cap = 0;
  bd->add_option("--ns", bd_ns, "comma separated grid densities");
  bd->add_option("--cap", bd_cap, "index cap (0 = n)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (cov->parsed()) {
      const ExperimentConfig c = resolve(g, cov_m);
      const XMethod method = parse_x_method(cov_method);
      const double v = x_cov(c.params, cov_s, cov_t, method);
      if (g.format == "json") {
        emit_json(g, out, "cov",
                  Json{{"schema_version", kReportSchemaVersion},
                       {"kind", "covariance"},
                       {"hurst", c.params.hurst},
                       {"gamma", c.params.gamma},
                       {"s", cov_s},
                       {"t", cov_t},
                       {"method", to_string(method)},
                       {"value", v}});
      } else {
        out << fixed_digits(v, cov_digits) << '\n';
      }
    } else if (dec->parsed()) {
      const ExperimentConfig c = resolve(g, dec_m);
      const XMethod ref = dec_ref == "auto" ? default_reference(c.params) : parse_x_method(dec_ref);
      std::optional<QuadratureSpec> tol;
      if (!g.config.empty()) tol = c.tolerances;
      const DecompositionReport rep = run_decomposition_check(c.params, ref, dec_grid, tol, dec_tol);
      if (g.format == "csv") {
        Sink sink(g, out, "decomposition", "csv");
        std::vector<std::vector<double>> rows;
        for (const auto& p : rep.points)
          if (p.error.empty()) rows.push_back({p.s, p.t, p.reference, p.decomposed, p.deviation});
        write_csv_table(sink.stream(), "ssgp.decomposition/1",
                        {{"hurst", format_double(c.params.hurst)},
                         {"gamma", format_double(c.params.gamma)},
                         {"reference", to_string(ref)},
                         {"kappa_paper", format_double(rep.kappa_paper)},
                         {"kappa_star", format_double(rep.kappa_star)},
                         {"lambda1_paper", format_double(rep.lambda1_paper)},
                         {"y_const", format_double(rep.y_const)},
                         {"kappa_consistent", rep.kappa_consistent()},
                         {"lambda_consistent", rep.lambda_consistent()}},
                        {"s", "t", "reference", "decomposed", "deviation"}, rows);
        sink.finish();
      } else {
        emit_json(g, out, "decomposition", rep.to_json());
      }
      if (rep.failures > 0) {
        err << rep.failures << " grid points failed\n";
        return 2;
      }
    } else if (sim->parsed()) {
      const ExperimentConfig c = resolve(g, sim_m);
      const Grid grid = Grid::make(c.n, c.horizon);
      const SeedSpec seed{c.master_seed, 0};
      PathSet paths;
      if (sim_method == "exact") {
        paths = sample_gaussian_paths(x_kernel(c.params), grid, seed, c.replications);
      } else if (sim_method == "constructive") {
        paths = sample_x_constructive(c.params, grid, seed, c.replications);
      } else if (sim_method == "fbm") {
        bool fell_back = false;
        paths = sample_fbm(c.params.hurst, grid, seed, c.replications,
                           sim_fbm == "circulant" ? FbmMethod::circulant : FbmMethod::cholesky,
                           &fell_back);
        if (fell_back) err << "circulant embedding not PSD; used Cholesky\n";
      } else {
        paths = sample_y_spectral(c.params, grid, seed, c.replications);
      }
      std::ostringstream meta;
      meta << "hurst=" << format_double(c.params.hurst) << "\ngamma=" << format_double(c.params.gamma)
           << "\nmaster_seed=" << c.master_seed;
      emit_paths(g, out, "paths_" + sim_method, paths, meta.str());
    } else if (hv->parsed()) {
      const ExperimentConfig c = resolve(g, hv_m);
      if (c.q < 1) throw DomainError("q must be >= 1");
      const Grid grid = Grid::make(c.n, c.horizon);
      const long count = grid.index_at(c.horizon);
      const std::vector<double> betas = exact_betas(c.params, c.n, count);
      const PathSet paths = sample_gaussian_paths(
          x_kernel(c.params), grid, SeedSpec{c.master_seed, static_cast<std::uint64_t>(hv_path)}, 1);
      const VariationResult vr = hermite_variation(paths.path(0), betas, c.q, c.horizon);
      if (g.format == "json") {
        emit_json(g, out, "hermvar",
                  Json{{"schema_version", kReportSchemaVersion},
                       {"kind", "hermite_variation"},
                       {"q", vr.q},
                       {"n", vr.n},
                       {"horizon", vr.horizon},
                       {"times", vr.times},
                       {"values", vr.values}});
      } else {
        Sink sink(g, out, "hermvar", "csv");
        write_variation_csv(sink.stream(), vr);
        sink.finish();
      }
    } else if (s2->parsed()) {
      const LimitVariance lv = s2_cut ? breuer_major_sigma2_at(s2_alpha, s2_q, *s2_cut)
                                      : breuer_major_sigma2(s2_alpha, s2_q, s2_tol);
      if (g.format == "json") {
        emit_json(g, out, "sigma2",
                  Json{{"schema_version", kReportSchemaVersion},
                       {"kind", "sigma2"},
                       {"alpha", s2_alpha},
                       {"q", s2_q},
                       {"sigma_sq", lv.sigma_sq},
                       {"truncation_M", lv.truncation_M},
                       {"tail_bound", lv.tail_bound}});
      } else {
        out << shortest(lv.sigma_sq) << '\n';
        out << "truncation_M=" << lv.truncation_M << " tail_bound=" << shortest(lv.tail_bound)
            << '\n';
      }
    } else if (clt->parsed()) {
      const ExperimentConfig c = resolve(g, clt_m);
      const ExperimentReport rep = run_clt_experiment(c);
      write_clt_outputs(rep);
      out << rep.to_json().dump(2) << '\n';
      err << "runtime " << rep.runtime_seconds << " s\n";
    } else if (cv->parsed()) {
      const ExperimentConfig c = resolve(g, cv_m);
      emit_table(g, out, cv_fbm ? "convergence_fbm" : "convergence",
                 run_variance_convergence(c.params, c.q, parse_list(cv_ns), c.horizon, cv_fbm));
    } else if (bd->parsed()) {
      const ExperimentConfig c = resolve(g, bd_m);
      emit_table(g, out, "bounds", run_bound_check(c.params, parse_list(bd_ns), bd_cap));
    }
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return 1;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return 1;
  } catch (const AccuracyError& e) {
    err << "accuracy failure: " << e.what() << " (best estimate " << e.best_estimate()
        << ", error estimate " << e.error_estimate() << ")\n";
    return 2;
  } catch (const MatrixError& e) {
    err << "matrix failure: " << e.what() << " (min eigenvalue " << e.min_eigenvalue() << ")\n";
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace ssgp::cli
