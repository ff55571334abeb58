#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smcc/distributed.hpp"

namespace smcc {

struct ExperimentConfig {
  std::vector<std::string> algorithms;  // greedy|lag|rand_greedi|r_dash|
                                        // g_dash|t_dash|t_dash_opt|l_dist|
                                        // med+<component>
  std::string objective = "maxcover";
  std::string dataset;  // edge list or similarity csv; empty = generator
  std::string generator = "ba";  // ba | random
  int gen_n = 1000;
  int gen_m = 2;
  double gen_density = 0.1;
  uint64_t gen_seed = 1;
  double influence_p = 0.01;
  double revenue_alpha = 0.3;

  std::vector<int> k_list;
  double eps = 0.1;
  int ell = 4;
  long psi = 0;  // 0 = auto: ceil(n/ell) * capacity_slack
  double capacity_slack = 1.0;
  std::vector<uint64_t> seeds;
  int parallelism = 1;
  double timeout_s = 300.0;
  bool best_of_all_machines = false;
  double opt_value = 0.0;  // t_dash_opt only

  void validate() const;
};

struct ExperimentRow {
  std::string algo;
  std::string objective;
  int n = 0;
  int k = 0;
  int ell = 0;
  double eps = 0.0;
  uint64_t seed = 0;
  double value = 0.0;
  long queries = 0;
  long adaptive_rounds = 0;
  long mr_rounds = 0;
  long elements_communicated = 0;
  long wall_ms = 0;
  std::string status = "ok";
};

SubmodularInstance build_instance(const ExperimentConfig& config);

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config,
                                          const SubmodularInstance& inst);
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config);

std::string experiment_csv_header();
std::string experiment_csv_row(const ExperimentRow& row);
std::string experiment_csv(const std::vector<ExperimentRow>& rows);

// min(requested, DASH_SMCC_THREADS) when the env var is set.
int capped_parallelism(int requested);

}  // namespace smcc
