#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgdlog/oracle_sim.hpp"

namespace sgdlog {

// Config schema for the `experiment` CLI verb.
//   experiment: "membership-scaling" | "perm-inversion" | "lemma5"
//   sizes: target |S| values (membership-scaling) or n values (perm-inversion)
//   trials: per size (or instance count for lemma5)
struct ExperimentConfig {
  std::string experiment;
  uint32_t k = 2;
  std::vector<uint64_t> sizes;
  int trials = 20;
  uint64_t seed = 1;
  SimMode mode = SimMode::classical;
  QueryAccounting accounting = QueryAccounting::unit;
};

ExperimentConfig parse_experiment_config(const nlohmann::json& j);

struct ExperimentRow {
  uint64_t size = 0;
  uint32_t k = 0;
  int trial = 0;
  uint64_t product_queries = 0;
  uint64_t permutation_queries = 0;
  uint64_t charged_queries = 0;
  bool success = false;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  nlohmann::json summary;
};

ExperimentResult run_experiment(const ExperimentConfig& config, int jobs = 1);

// Fixed-column CSV (documented in --help); "." decimal point, "," separator.
std::string rows_to_csv(const std::vector<ExperimentRow>& rows);

// Least-squares slope of log10(y) against log10(x).
double fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

}  // namespace sgdlog
