#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smcc/distributed.hpp"

namespace smcc {

struct BruteForceResult {
  double opt_value = 0.0;
  std::vector<int> opt_set;  // lexicographically smallest optimum
  long enumerated = 0;
};

// Exact optimum by enumeration of all max(k)-subsets; uses the raw,
// uninstrumented evaluation path. Guarded at C(n,k) <= 1e7.
BruteForceResult brute_force_opt(const SubmodularInstance& inst, int k);

enum class RcpAlgorithm { ThreshSeq, Lag, Ltc };

std::string rcp_algorithm_name(RcpAlgorithm a);

struct RcpParams {
  int k = 2;
  double eps = 0.2;
  double delta = 0.2;
  double tau = 0.0;  // thresh_seq only
};

struct RcpTrial {
  enum class Verdict { holds, violated, precondition_unmet };
  std::string algorithm;
  std::vector<int> a, b;
  Verdict verdict = Verdict::holds;
  std::string details;
};

// Checks the consistency property: if no b in B survives alone and the run
// on A succeeds, the run on A ∪ B must succeed and match the run on A as an
// ordered solution.
RcpTrial rcp_trial(RcpAlgorithm algorithm, const SubmodularInstance& inst,
                   std::span<const int> a, std::span<const int> b,
                   const RcpParams& params, const RandomTape& tape);

struct RcpSuiteResult {
  long trials = 0;
  long holds = 0;
  long violations = 0;
  long unmet = 0;
  std::string first_violation;
};

// Randomized trials on seeded instances; B biased toward low-value elements.
RcpSuiteResult rcp_random_suite(RcpAlgorithm algorithm, int trials,
                                uint64_t seed, int max_n, int max_k);
// Every disjoint (A, B) pair of the instance's ground set.
RcpSuiteResult rcp_exhaustive_suite(RcpAlgorithm algorithm,
                                    const SubmodularInstance& inst,
                                    const RcpParams& params,
                                    const RandomTape& tape);

struct RatioConfig {
  std::string algorithm;  // greedy|threshold_greedy|lag|rand_greedi|r_dash|
                          // g_dash|t_dash_opt|t_dash|l_dist|med+rand_greedi
  std::string family = "maxcover";
  int n = 16;
  double density = 0.2;
  int k = 3;
  int seeds = 200;
  double eps = 0.2;
  int ell = 2;
  long psi = 0;  // 0 = generous default (capacity is tested elsewhere)
  double capacity_slack = 1.5;
  double slack = 0.95;
  uint64_t instance_seed = 1;
};

struct RatioRow {
  RatioConfig config;
  double opt = 0.0;
  double bound = 0.0;  // theoretical ratio
  double mean_value = 0.0;
  int degraded_runs = 0;
  bool pass = false;
};

double theoretical_ratio(const std::string& algorithm, double eps);
RatioRow ratio_run(const RatioConfig& config);
std::string ratio_csv_header();
std::string ratio_csv_row(const RatioRow& row);

struct SubmodularityReport {
  bool ok = true;
  std::string counterexample;
};

// Exhaustive for n <= 10, randomized otherwise.
SubmodularityReport submodularity_check(const SubmodularInstance& inst,
                                        int trials = 2000, uint64_t seed = 7);

}  // namespace smcc
