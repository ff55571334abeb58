#pragma once

#include <string>

#include "smcc/centralized.hpp"
#include "smcc/cluster.hpp"

namespace smcc {

struct RunReport {
  std::string algorithm;
  OrderedSolution solution;
  long queries = 0;
  long adaptive_rounds = 0;
  long mr_rounds = 0;
  long elements_communicated = 0;
  uint64_t seed = 0;
  int n = 0;
  int k = 0;
  int ell = 1;
  long psi = 0;
  double eps = 0.0;
  std::string status = "ok";  // ok | degraded
};

struct DistOptions {
  // Return the best over all machine solutions instead of {T, S_1}.
  bool best_of_all_machines = false;
  // Restrict partitioning and candidate pools to this subset of the ground
  // set (empty = everything). Used by med for residual iterations.
  std::vector<int> universe;
};

RunReport r_dash(const SubmodularInstance& inst, int k, double eps,
                 const ClusterConfig& cfg, const RandomTape& tape,
                 const DistOptions& opts = {});

RunReport g_dash(const SubmodularInstance& inst, int k, double eps,
                 const ClusterConfig& cfg, const RandomTape& tape,
                 const DistOptions& opts = {});

RunReport t_dash_opt(const SubmodularInstance& inst, int k, double eps,
                     const ClusterConfig& cfg, const RandomTape& tape,
                     double opt_value, const DistOptions& opts = {});

RunReport t_dash(const SubmodularInstance& inst, int k, double eps,
                 const ClusterConfig& cfg, const RandomTape& tape,
                 const DistOptions& opts = {});

RunReport l_dist(const SubmodularInstance& inst, int k, double eps,
                 const ClusterConfig& cfg, const RandomTape& tape,
                 const DistOptions& opts = {});

RunReport rand_greedi(const SubmodularInstance& inst, int k,
                      const ClusterConfig& cfg, const RandomTape& tape,
                      const DistOptions& opts = {});

enum class MedComponent { RDash, GDash, TDash, LDist, RandGreedi };

std::string med_component_name(MedComponent c);

// Runs the component m = ceil(k/k') times on residual marginal objectives,
// lifting the feasible constraint size. Ships the running solution as a
// marginal summary when the objective supports one, otherwise as elements.
RunReport med(const SubmodularInstance& inst, int k, const ClusterConfig& cfg,
              MedComponent component, double eps, const RandomTape& tape);

}  // namespace smcc
