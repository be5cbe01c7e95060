#include <doctest.h>

#include <cmath>

#include "sgdlog/experiment.hpp"

using namespace sgdlog;

TEST_SUITE("experiment") {

TEST_CASE("config parsing") {
  const auto cfg = parse_experiment_config(
      nlohmann::json{{"experiment", "membership-scaling"},
                     {"k", 3},
                     {"sizes", {100, 1000}},
                     {"trials", 4},
                     {"seed", 9},
                     {"mode", "classical"},
                     {"accounting", "unit"}});
  CHECK(cfg.k == 3);
  CHECK(cfg.sizes == std::vector<uint64_t>{100, 1000});
  CHECK(cfg.trials == 4);
  CHECK(cfg.mode == SimMode::classical);
  CHECK(cfg.accounting == QueryAccounting::unit);

  CHECK_THROWS_AS(
      parse_experiment_config(nlohmann::json{{"experiment", "bogus"}}),
      MalformedSpec);
}

TEST_CASE("log-log slope fit recovers a power law") {
  std::vector<std::pair<double, double>> pts;
  for (double x : {100.0, 1000.0, 10000.0, 100000.0})
    pts.emplace_back(x, 3.5 * std::pow(x, 0.37));
  CHECK(fit_loglog_slope(pts) == doctest::Approx(0.37).epsilon(1e-9));
}

TEST_CASE("small scaling run succeeds and reports a sane slope") {
  ExperimentConfig cfg;
  cfg.experiment = "membership-scaling";
  cfg.k = 2;
  cfg.sizes = {100, 1000, 10000};
  cfg.trials = 3;
  cfg.seed = 5;
  const auto result = run_experiment(cfg);
  CHECK(result.rows.size() == 9);
  for (const auto& row : result.rows) {
    CHECK(row.success);
    CHECK(row.charged_queries > 0);
  }
  const double slope = result.summary.at("slope_charged").get<double>();
  CHECK(slope > 0.1);
  CHECK(slope < 0.45);
}

TEST_CASE("parallel trials produce the same rows as serial") {
  ExperimentConfig cfg;
  cfg.experiment = "membership-scaling";
  cfg.k = 2;
  cfg.sizes = {100, 400};
  cfg.trials = 3;
  cfg.seed = 6;
  const auto serial = run_experiment(cfg, 1);
  const auto parallel = run_experiment(cfg, 4);
  CHECK(rows_to_csv(serial.rows) == rows_to_csv(parallel.rows));
}

TEST_CASE("lemma5 run finds no violations") {
  ExperimentConfig cfg;
  cfg.experiment = "lemma5";
  cfg.trials = 40;
  cfg.seed = 7;
  const auto result = run_experiment(cfg);
  CHECK(result.summary.at("violations").get<uint64_t>() == 0);
}

TEST_CASE("perm-inversion run inverts every sampled point") {
  ExperimentConfig cfg;
  cfg.experiment = "perm-inversion";
  cfg.k = 2;
  cfg.sizes = {4, 8};  // n values
  cfg.trials = 4;
  cfg.seed = 8;
  const auto result = run_experiment(cfg);
  CHECK(result.rows.size() == 8);
  for (const auto& row : result.rows) CHECK(row.success);
}

TEST_CASE("csv output is stable and well-formed") {
  ExperimentConfig cfg;
  cfg.experiment = "lemma5";
  cfg.trials = 5;
  cfg.seed = 11;
  const auto a = run_experiment(cfg);
  const auto b = run_experiment(cfg);
  const std::string csv = rows_to_csv(a.rows);
  CHECK(csv == rows_to_csv(b.rows));
  CHECK(csv.rfind("size,k,trial,product_queries,permutation_queries,"
                  "charged_queries,success\n", 0) == 0);
}

}  // TEST_SUITE
