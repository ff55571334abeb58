#include "smcc/cluster.hpp"

#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <thread>

namespace smcc {
namespace {

constexpr uint64_t kPartitionTapeTag = 0x7061;

std::vector<int> resolve_universe(const GroundSet& ground,
                                  std::span<const int> universe) {
  if (!universe.empty()) return {universe.begin(), universe.end()};
  std::vector<int> all(ground.n);
  for (int i = 0; i < ground.n; ++i) all[i] = i;
  return all;
}

}  // namespace

void ClusterConfig::validate(int n) const {
  if (ell < 1) throw ValidationError("cluster needs at least one machine");
  if (ell > n && n > 0)
    throw ValidationError("more machines than ground-set elements");
  if (psi < 1) throw ValidationError("per-machine capacity must be >= 1");
  if (static_cast<double>(psi) * ell < n)
    throw ValidationError("psi * ell must cover the ground set");
}

long MachineState::load() const {
  long total = static_cast<long>(local_elements.size());
  for (const auto& payload : inbox) total += static_cast<long>(payload.size());
  return total;
}

FeasibilityVerdict check_constraint_feasibility(const ClusterConfig& cfg,
                                                const std::string& algorithm,
                                                int k, int n, double eps,
                                                bool summary_supported) {
  const double psi = static_cast<double>(cfg.psi);
  const double ell = static_cast<double>(cfg.ell);
  auto fail = [&](const std::string& ineq) {
    return FeasibilityVerdict{false, "requires " + ineq};
  };

  if (algorithm == "r_dash" || algorithm == "rand_greedi" ||
      algorithm == "t_dash_opt") {
    if (!(k < psi / ell)) return fail("k < psi/ell");
  } else if (algorithm == "g_dash") {
    if (!(k < eps * psi / ell)) return fail("k < eps*psi/ell");
  } else if (algorithm == "t_dash") {
    if (!(k * std::log(std::max(2, k)) < eps * psi / ell))
      return fail("k*log(k) < eps*psi/ell");
  } else if (algorithm == "l_dist") {
    if (!(k < psi / (ell * std::log(psi))))
      return fail("k < psi/(ell*log(psi))");
  } else if (algorithm == "med") {
    if (k > n) return fail("k <= n");
    if (!summary_supported) {
      if (!(psi >= 2.0 * n / ell)) return fail("psi >= 2n/ell");
      if (cfg.ell > 1 && !(k <= static_cast<double>(n) / (ell - 1.0)))
        return fail("k <= n/(ell-1)");
    }
  } else {
    throw ValidationError("unknown algorithm '" + algorithm + "'");
  }
  return {};
}

std::vector<std::vector<int>> partition_uniform(const GroundSet& ground,
                                                const ClusterConfig& cfg,
                                                const RandomTape& tape,
                                                std::span<const int> universe) {
  cfg.validate(ground.n);
  RandomTape part = tape.child(kPartitionTapeTag);
  std::vector<std::vector<int>> parts(cfg.ell);
  for (int e : resolve_universe(ground, universe))
    parts[part.draw_int(e, cfg.ell)].push_back(e);
  for (const auto& p : parts)
    if (static_cast<long>(p.size()) > cfg.effective_capacity())
      throw CapacityViolationError("partition exceeds machine capacity");
  return parts;
}

std::vector<std::vector<int>> partition_independent(
    const GroundSet& ground, const ClusterConfig& cfg, const RandomTape& tape,
    std::span<const int> universe) {
  cfg.validate(ground.n);
  RandomTape part = tape.child(kPartitionTapeTag);
  std::vector<std::vector<int>> parts(cfg.ell);
  for (int e : resolve_universe(ground, universe)) {
    RandomTape row = part.child(static_cast<uint64_t>(e));
    for (int m = 0; m < cfg.ell; ++m)
      if (row.draw_int(m, cfg.ell) == 0) parts[m].push_back(e);
  }
  for (const auto& p : parts)
    if (static_cast<long>(p.size()) > cfg.effective_capacity())
      throw CapacityViolationError("partition exceeds machine capacity");
  return parts;
}

SimCluster::SimCluster(ClusterConfig cfg, const SubmodularInstance& inst)
    : cfg_(cfg), inst_(&inst), machines_(cfg.ell) {
  cfg_.validate(inst.n());
  for (int i = 0; i < cfg_.ell; ++i) machines_[i].id = i;
}

void SimCluster::set_partition(std::vector<std::vector<int>> parts) {
  if (static_cast<int>(parts.size()) != cfg_.ell)
    throw ValidationError("partition count must equal machine count");
  for (int i = 0; i < cfg_.ell; ++i)
    machines_[i].local_elements = std::move(parts[i]);
}

void SimCluster::run_round(std::span<const Task> tasks) {
  if (static_cast<int>(tasks.size()) != cfg_.ell)
    throw ValidationError("one task per machine required");

  std::vector<std::vector<Message>> outboxes(cfg_.ell);
  std::vector<std::shared_ptr<QueryLedger>> strands(cfg_.ell);
  for (auto& s : strands) s = std::make_shared<QueryLedger>();

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= cfg_.ell) return;
      if (!tasks[i]) continue;
      try {
        SubmodularInstance view = inst_->with_ledger(strands[i]);
        outboxes[i] = tasks[i](machines_[i], view);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  int workers = std::max(1, std::min(cfg_.parallelism, cfg_.ell));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Machines within a round run concurrently: queries add up, adaptive
  // rounds merge as the maximum strand depth.
  long q = 0, rounds = 0;
  for (const auto& s : strands) {
    q += s->queries.load();
    rounds = std::max(rounds, s->adaptive_rounds.load());
  }
  inst_->ledger()->queries.fetch_add(q);
  inst_->ledger()->adaptive_rounds.fetch_add(rounds);

  deliver(std::move(outboxes));
  ++ledger_.mr_rounds;
}

void SimCluster::deliver(std::vector<std::vector<Message>> outboxes) {
  for (auto& m : machines_) m.inbox.clear();
  for (int from = 0; from < cfg_.ell; ++from) {
    for (auto& msg : outboxes[from]) {
      if (msg.to < 0 || msg.to >= cfg_.ell)
        throw ValidationError("message to unknown machine");
      if (msg.to != from)
        ledger_.elements_communicated +=
            static_cast<long>(msg.elements.size());
      machines_[msg.to].inbox.push_back(std::move(msg.elements));
    }
  }
  for (const auto& m : machines_) {
    if (m.load() > cfg_.effective_capacity())
      throw CapacityViolationError(
          "machine " + std::to_string(m.id) + " holds " +
          std::to_string(m.load()) + " elements, capacity " +
          std::to_string(cfg_.effective_capacity()));
  }
}

}  // namespace smcc
