#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "smcc/oracle.hpp"
#include "smcc/randomness.hpp"

namespace smcc {

struct ClusterConfig {
  int ell = 1;            // machine count
  long psi = 0;           // per-machine capacity in elements
  double capacity_slack = 1.0;
  int parallelism = 1;    // worker threads for machine tasks

  long effective_capacity() const {
    return static_cast<long>(static_cast<double>(psi) * capacity_slack);
  }
  void validate(int n) const;
};

struct RoundLedger {
  long mr_rounds = 0;
  long elements_communicated = 0;
};

struct MachineState {
  int id = 0;
  std::vector<int> local_elements;
  std::vector<std::vector<int>> inbox;  // element payloads received last round

  long load() const;
};

struct FeasibilityVerdict {
  bool feasible = true;
  std::string reason;
};

// Algorithm-specific cardinality preconditions, constants taken as 1.
FeasibilityVerdict check_constraint_feasibility(const ClusterConfig& cfg,
                                                const std::string& algorithm,
                                                int k, int n, double eps = 0.1,
                                                bool summary_supported = true);

// Every element lands on exactly one machine, chosen uniformly from a
// dedicated partition sub-tape. A nonempty `universe` restricts the elements
// partitioned; per-element draws stay addressed by element id.
std::vector<std::vector<int>> partition_uniform(
    const GroundSet& ground, const ClusterConfig& cfg, const RandomTape& tape,
    std::span<const int> universe = {});

// Every (element, machine) pair included independently with probability
// 1/ell; elements may land on zero or several machines.
std::vector<std::vector<int>> partition_independent(
    const GroundSet& ground, const ClusterConfig& cfg, const RandomTape& tape,
    std::span<const int> universe = {});

// Barrier-synchronized machines. Tasks compute on their machine's state and
// emit messages; messages are delivered, counted and capacity-checked at the
// barrier. Machine tasks may run on a worker pool; outputs and counters do
// not depend on the schedule.
class SimCluster {
 public:
  struct Message {
    int to = 0;
    std::vector<int> elements;
  };
  // Task returns outbound messages; the per-machine ledger collects the
  // task's query traffic for a max-merge of adaptive rounds at the barrier.
  using Task = std::function<std::vector<Message>(MachineState&,
                                                  const SubmodularInstance&)>;

  SimCluster(ClusterConfig cfg, const SubmodularInstance& inst);

  void set_partition(std::vector<std::vector<int>> parts);
  MachineState& machine(int i) { return machines_[i]; }
  int ell() const { return cfg_.ell; }
  const RoundLedger& ledger() const { return ledger_; }
  const ClusterConfig& config() const { return cfg_; }

  // Runs one MR round: tasks[i] on machine i (empty task = idle machine).
  void run_round(std::span<const Task> tasks);
  // Accounting hook for payloads that are not ground-set elements (summaries).
  void note_round_without_tasks() { ++ledger_.mr_rounds; }

 private:
  void deliver(std::vector<std::vector<Message>> outboxes);

  ClusterConfig cfg_;
  const SubmodularInstance* inst_;
  std::vector<MachineState> machines_;
  RoundLedger ledger_;
};

}  // namespace smcc
