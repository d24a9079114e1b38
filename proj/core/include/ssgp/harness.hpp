#pragma once
// Experiment runners behind the command line tool and the acceptance suite.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ssgp/analytic.hpp"
#include "ssgp/covariance.hpp"
#include "ssgp/io.hpp"
#include "ssgp/quadrature.hpp"
#include "ssgp/stats.hpp"

namespace ssgp {

/// Everything needed to rerun a Monte Carlo experiment. The JSON form uses
/// the keys params{hurst, gamma}, q, n, horizon, replications, master_seed,
/// tolerances{abs_tol, rel_tol, max_subdivisions, tail_cut, strict} and
/// output_dir; absent keys keep their defaults, unknown keys are rejected.
struct ExperimentConfig {
  ModelParams params = ModelParams::make(0.7, 0.2);
  int q = 2;
  long n = 1024;
  double horizon = 1.0;
  long replications = 2000;
  std::uint64_t master_seed = 42;
  QuadratureSpec tolerances = QuadratureSpec::oscillatory();
  std::string output_dir = "ssgp_out";

  void validate() const;
  Json to_json() const;
  static ExperimentConfig from_json(const Json& doc);
};

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

Json to_json(const QuadratureSpec& spec);
QuadratureSpec quadrature_spec_from_json(const Json& doc, QuadratureSpec base = {});

// Decomposition check --------------------------------------------------------

struct DecompositionGridSpec {
  int points = 10;   // per axis; nodes hi * i / points, i = 1..points
  double hi = 2.0;
};

struct DecompositionPoint {
  double s = 0.0;
  double t = 0.0;
  double reference = 0.0;
  double decomposed = 0.0;
  double deviation = 0.0;
  std::string error;  // non-empty when a route failed at this point
};

struct DecompositionReport {
  ModelParams params;
  XMethod reference = XMethod::spectral;
  DecompositionGridSpec grid;
  double closure_tol = 1e-6;
  std::vector<DecompositionPoint> points;
  long failures = 0;
  double max_deviation = 0.0;  // with kappa_star and y_const

  double kappa_paper = 0.0;
  double kappa_star = 0.0;
  double max_deviation_kappa_paper = 0.0;
  double y_const = 0.0;
  double lambda1_paper = 0.0;
  double max_deviation_lambda1_paper = 0.0;

  /// "kappa_star", "kappa_paper", "both" or "neither": which candidates close
  /// the identity within closure_tol.
  std::string kappa_consistent() const;
  std::string lambda_consistent() const;
  Json to_json() const;
};

/// h_half when H = 1/2, timedomain when H > 1/2, spectral otherwise.
XMethod default_reference(const ModelParams& params);

/// max over the grid of |x_cov(reference) - x_cov(decomposed)|, also with the
/// fBm scale replaced by kappa_paper and the smooth scale by lambda1_paper.
/// A failing point is recorded and skipped. Without tolerances the reference
/// route uses default_x_cov_spec.
DecompositionReport run_decomposition_check(
    const ModelParams& params, XMethod reference, const DecompositionGridSpec& grid = {},
    const std::optional<QuadratureSpec>& tolerances = std::nullopt, double closure_tol = 1e-6);

// Monte Carlo CLT ------------------------------------------------------------

struct ExperimentReport {
  ExperimentConfig config;
  long samples = 0;
  MomentStats moments;
  double ks_statistic = 0.0;
  double ks_p_value = 0.0;
  double exact_variance = 0.0;
  double sigma_sq_limit = 0.0;
  double asymptotic_variance = 0.0;  // sigma^2 * horizon
  double sampler_jitter = 0.0;
  double runtime_seconds = 0.0;      // not part of the JSON form
  std::vector<double> values;        // F_n(T), one per replication

  Json to_json() const;
};

/// Simulates `replications` exact paths of X on j/n, computes F_n(horizon) for
/// each and tests them against N(0, exact finite-n variance). Violating
/// alpha < 2 - 1/q throws DomainError before any simulation.
ExperimentReport run_clt_experiment(const ExperimentConfig& config);

/// Writes clt_samples.csv and clt_report.json into config.output_dir.
void write_clt_outputs(const ExperimentReport& report);

void write_clt_samples_csv(std::ostream& out, const ExperimentReport& report);

// Variance convergence -------------------------------------------------------

struct ConvergenceRow {
  long n = 0;
  double variance = 0.0;  // Var F_n(T) / T
  double gap = 0.0;       // |variance - sigma^2|
};

struct ConvergenceTable {
  ModelParams params;
  int q = 2;
  double horizon = 1.0;
  bool fbm_only = false;
  double sigma_sq = 0.0;
  std::vector<ConvergenceRow> rows;

  bool gaps_strictly_decreasing() const;
  void write_csv(std::ostream& out) const;
  Json to_json() const;
};

/// fbm_only replaces X by kappa_star times an fBm of index alpha/2.
ConvergenceTable run_variance_convergence(const ModelParams& params, int q,
                                          const std::vector<long>& ns, double horizon = 1.0,
                                          bool fbm_only = false);

// Lemma bound ratios ----------------------------------------------------------

struct BoundRow {
  long n = 0;
  long cap = 0;
  double max_ratio_yy = 0.0;
  double max_ratio_wy = 0.0;
  double min_ratio_yy = 0.0;
  double min_ratio_wy = 0.0;
};

struct BoundTable {
  ModelParams params;
  std::vector<BoundRow> rows;

  /// last row maximum over first row maximum.
  double growth_yy() const;
  double growth_wy() const;
  void write_csv(std::ostream& out) const;
  Json to_json() const;
};

/// Per n, extreme ratios over 1 <= j, k <= min(cap, n); cap <= 0 means n.
BoundTable run_bound_check(const ModelParams& params, const std::vector<long>& ns,
                           long cap = 0);

// psi growth ------------------------------------------------------------------

struct PsiBoundRow {
  int points_per_octave = 0;
  double sup_ratio = 0.0;        // sup |psi(x)| / x^(2H-1)
  double sup_slope_ratio = 0.0;  // sup |secant slope| / x_mid^(2H-2)
};

struct PsiBoundTable {
  ModelParams params;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<PsiBoundRow> rows;

  /// Largest relative change of either column between consecutive rows.
  double max_relative_change() const;
  void write_csv(std::ostream& out) const;
  Json to_json() const;
};

/// Geometric grids on [2^lo_exp, 2^hi_exp] with the given densities.
PsiBoundTable run_psi_bound_check(const ModelParams& params,
                                  const std::vector<int>& points_per_octave, int lo_exp = -5,
                                  int hi_exp = 5);

}  // namespace ssgp
