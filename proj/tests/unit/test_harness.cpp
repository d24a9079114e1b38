#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ssgp/errors.hpp"
#include "ssgp/harness.hpp"

using namespace ssgp;

namespace {
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("ssgp_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}
}  // namespace

TEST_CASE("config round trip") {
  ExperimentConfig c;
  c.params = ModelParams::make(0.55, 0.3);
  c.q = 3;
  c.n = 300;
  c.horizon = 0.1 + 0.2;
  c.replications = 77;
  c.master_seed = 18446744073709551615ull;
  c.tolerances.abs_tol = 1.234e-9;
  c.tolerances.strict = false;
  c.output_dir = "some/where";
  const Json doc = Json::parse(c.to_json().dump());
  const ExperimentConfig back = ExperimentConfig::from_json(doc);
  CHECK(back == c);
  CHECK(back.horizon == c.horizon);
  CHECK(back.master_seed == c.master_seed);
  CHECK(back.tolerances.abs_tol == c.tolerances.abs_tol);

  CHECK_THROWS_AS(ExperimentConfig::from_json(Json{{"bogus", 1}}), DomainError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(Json{{"replications", 0}}), DomainError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(Json{{"master_seed", -1}}), DomainError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(Json{{"q", "two"}}), DomainError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(Json{{"params", {{"hurst", 0.5}, {"gamma", 1.5}}}}),
                  DomainError);
  CHECK(ExperimentConfig::from_json(Json::object()) == ExperimentConfig{});
}

TEST_CASE("decomposition check") {
  const ModelParams half = ModelParams::make(0.5, 0.5);
  const DecompositionReport r = run_decomposition_check(half, default_reference(half), {4, 2.0});
  CHECK(r.reference == XMethod::h_half);
  CHECK(r.failures == 0);
  CHECK(r.max_deviation <= 1e-8);
  CHECK(r.kappa_paper == doctest::Approx(1.2533141).epsilon(1e-7));
  CHECK(r.kappa_star == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.max_deviation_kappa_paper > 0.3);
  CHECK(r.max_deviation_lambda1_paper > 0.3);
  CHECK(r.kappa_consistent() == "kappa_star");
  CHECK(r.lambda_consistent() == "y_const");
  const Json j = r.to_json();
  CHECK(j["kappa"]["kappa_paper"].get<double>() == r.kappa_paper);
  CHECK(j["points"].size() == 16);

  const ModelParams p = ModelParams::make(0.75, 0.5);
  CHECK(default_reference(p) == XMethod::timedomain);
  const DecompositionReport t = run_decomposition_check(p, XMethod::timedomain, {3, 2.0});
  CHECK(t.max_deviation <= 1e-6);
  CHECK_THROWS_AS(run_decomposition_check(p, XMethod::decomposed), DomainError);

  // a failing route is recorded per point and the run continues
  const DecompositionReport f =
      run_decomposition_check(p, XMethod::timedomain, {2, 2.0}, QuadratureSpec{1e-15, 1e-15, 1, 0, true});
  CHECK(f.failures == 4);
  CHECK_FALSE(f.points[0].error.empty());
}

TEST_CASE("clt experiment") {
  ExperimentConfig c;
  c.params = ModelParams::make(0.6, 0.2);
  c.n = 64;
  c.replications = 200;
  c.output_dir = scratch("clt").string();
  const ExperimentReport r = run_clt_experiment(c);
  CHECK(r.asymptotic_variance == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(r.exact_variance > 0);
  CHECK(r.ks_p_value >= 0.0);
  CHECK(r.ks_p_value <= 1.0);
  CHECK(r.samples == 200);
  CHECK(std::abs(r.moments.mean) <= 5 * std::sqrt(r.exact_variance / 200));

  write_clt_outputs(r);
  const auto dir = std::filesystem::path(c.output_dir);
  const std::string csv1 = slurp(dir / "clt_samples.csv");
  const std::string json1 = slurp(dir / "clt_report.json");
  CHECK(csv1.rfind("# schema=ssgp.clt_samples/1\n", 0) == 0);

  // rerun from the embedded config
  const ExperimentConfig again = ExperimentConfig::from_json(Json::parse(json1)["config"]);
  write_clt_outputs(run_clt_experiment(again));
  CHECK(slurp(dir / "clt_samples.csv") == csv1);
  CHECK(slurp(dir / "clt_report.json") == json1);

  ExperimentConfig bad = c;
  bad.params = ModelParams::make(0.9, 0.1);  // alpha = 1.7 > 1.5
  CHECK_THROWS_AS(run_clt_experiment(bad), DomainError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("variance convergence tables") {
  const ModelParams p = ModelParams::make(0.7, 0.2);
  const ConvergenceTable t = run_variance_convergence(p, 2, {32, 128, 512});
  REQUIRE(t.rows.size() == 3);
  for (const auto& r : t.rows) CHECK(r.variance > 0);
  CHECK(t.gaps_strictly_decreasing());
  const ConvergenceTable f = run_variance_convergence(p, 2, {32, 128, 512}, 1.0, true);
  CHECK(f.gaps_strictly_decreasing());
  CHECK(f.rows.back().gap < t.rows.back().gap);
  std::ostringstream os;
  t.write_csv(os);
  CHECK(os.str().find("n,variance,gap\n") != std::string::npos);
  CHECK_THROWS_AS(run_variance_convergence(p, 2, {1}), DomainError);
}

TEST_CASE("bound tables") {
  const ModelParams p = ModelParams::make(0.7, 0.2);
  const BoundTable b = run_bound_check(p, {8, 16, 32});
  for (const auto& r : b.rows) {
    CHECK(std::isfinite(r.max_ratio_yy));
    CHECK(std::isfinite(r.max_ratio_wy));
    CHECK(r.min_ratio_yy > 0);
    CHECK(r.min_ratio_wy > 0);
  }
  CHECK(b.growth_yy() <= 1.1);
  CHECK(b.rows[1].cap == 16);
  CHECK(run_bound_check(p, {32}, 8).rows[0].cap == 8);
}

TEST_CASE("psi growth table") {
  const PsiBoundTable t = run_psi_bound_check(ModelParams::make(0.7, 0.2), {4, 8});
  CHECK(t.rows.size() == 2);
  CHECK(t.max_relative_change() <= 0.05);
  CHECK(t.lo == 1.0 / 32);
}
