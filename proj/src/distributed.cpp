#include "smcc/distributed.hpp"

#include <algorithm>
#include <cmath>

namespace smcc {
namespace {

constexpr uint64_t kMachineTag = 1;
constexpr uint64_t kPrimaryTag = 2;
constexpr uint64_t kRoundTag = 3;
constexpr uint64_t kSampleTag = 4;
constexpr uint64_t kStride = 1 << 20;

struct Snapshot {
  long queries = 0;
  long rounds = 0;
};

Snapshot snap(const SubmodularInstance& inst) {
  return {inst.ledger()->queries.load(), inst.ledger()->adaptive_rounds.load()};
}

void fill_report(RunReport& rep, const SubmodularInstance& inst,
                 const Snapshot& before, const SimCluster& cluster, int k,
                 const ClusterConfig& cfg, double eps) {
  Snapshot after = snap(inst);
  rep.queries = after.queries - before.queries;
  rep.adaptive_rounds = after.rounds - before.rounds;
  rep.mr_rounds = cluster.ledger().mr_rounds;
  rep.elements_communicated = cluster.ledger().elements_communicated;
  rep.n = inst.n();
  rep.k = k;
  rep.ell = cfg.ell;
  rep.psi = cfg.psi;
  rep.eps = eps;
}

void require_feasible(const ClusterConfig& cfg, const std::string& algo,
                      int k, int n, double eps, bool summary_ok = true) {
  auto verdict = check_constraint_feasibility(cfg, algo, k, n, eps,
                                              summary_ok);
  if (!verdict.feasible)
    throw InfeasibleError(algo + " infeasible: " + verdict.reason);
}

std::vector<int> union_items(std::span<const OrderedSolution> sols) {
  std::vector<int> all;
  for (const auto& s : sols)
    all.insert(all.end(), s.items.begin(), s.items.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

// Runs `count` logical strands inside one machine task; queries add up,
// adaptive rounds merge as the deepest strand.
template <typename Fn>
void parallel_strands(const SubmodularInstance& view, int count, Fn&& fn) {
  long q = 0, r = 0;
  for (int t = 0; t < count; ++t) {
    auto led = std::make_shared<QueryLedger>();
    fn(t, view.with_ledger(led));
    q += led->queries.load();
    r = std::max(r, led->adaptive_rounds.load());
  }
  view.ledger()->queries.fetch_add(q);
  view.ledger()->adaptive_rounds.fetch_add(r);
}

const OrderedSolution& pick_best(std::span<const OrderedSolution* const> c) {
  const OrderedSolution* best = c[0];
  for (const auto* s : c)
    if (s->value > best->value) best = s;
  return *best;
}

}  // namespace

RunReport r_dash(const SubmodularInstance& inst, int k, double eps,
                 const ClusterConfig& cfg, const RandomTape& tape,
                 const DistOptions& opts) {
  require_feasible(cfg, "r_dash", k, inst.n(), eps);
  RunReport rep;
  rep.algorithm = "r_dash";
  Snapshot before = snap(inst);

  SimCluster cluster(cfg, inst);
  cluster.set_partition(
      partition_uniform(inst.ground(), cfg, tape, opts.universe));

  std::vector<OrderedSolution> sols(cfg.ell);
  std::vector<LagStats> stats(cfg.ell);
  std::vector<SimCluster::Task> round1(cfg.ell);
  for (int i = 0; i < cfg.ell; ++i) {
    round1[i] = [&, i](MachineState& m, const SubmodularInstance& view)
        -> std::vector<SimCluster::Message> {
      sols[i] = lag(view, m.local_elements, k, eps, std::nullopt,
                    tape.child(kMachineTag).child(i), &stats[i]);
      m.local_elements = sols[i].items;  // partition no longer needed
      if (i == 0) return {};
      return {{0, sols[i].items}};
    };
  }
  cluster.run_round(round1);

  OrderedSolution merged;
  LagStats merge_stats;
  std::vector<SimCluster::Task> round2(cfg.ell);
  round2[0] = [&](MachineState&, const SubmodularInstance& view)
      -> std::vector<SimCluster::Message> {
    merged = lag(view, union_items(sols), k, eps, std::nullopt,
                 tape.child(kPrimaryTag), &merge_stats);
    return {};
  };
  cluster.run_round(round2);

  std::vector<const OrderedSolution*> candidates{&merged, &sols[0]};
  if (opts.best_of_all_machines)
    for (int i = 1; i < cfg.ell; ++i) candidates.push_back(&sols[i]);
  rep.solution = pick_best(candidates);

  for (const auto& s : stats) merge_stats.failures += s.failures;
  if (merge_stats.failures > 0) rep.status = "degraded";
  fill_report(rep, inst, before, cluster, k, cfg, eps);
  return rep;
}

RunReport g_dash(const SubmodularInstance& inst, int k, double eps,
                 const ClusterConfig& cfg, const RandomTape& tape,
                 const DistOptions& opts) {
  require_feasible(cfg, "g_dash", k, inst.n(), eps);
  RunReport rep;
  rep.algorithm = "g_dash";
  Snapshot before = snap(inst);

  SimCluster cluster(cfg, inst);
  const int rounds = static_cast<int>(std::ceil(1.0 / eps));
  OrderedSolution best;
  std::vector<int> pool;  // C_{r-1}
  int failures = 0;

  for (int r = 1; r <= rounds; ++r) {
    cluster.set_partition(partition_uniform(
        inst.ground(), cfg, tape.child(kRoundTag).child(r), opts.universe));

    std::vector<OrderedSolution> sols(cfg.ell);
    std::vector<LagStats> stats(cfg.ell);
    std::vector<SimCluster::Task> tasks(cfg.ell);
    for (int i = 0; i < cfg.ell; ++i) {
      tasks[i] = [&, i, r](MachineState& m, const SubmodularInstance& view)
          -> std::vector<SimCluster::Message> {
        std::vector<int> local(m.local_elements);
        local.insert(local.end(), pool.begin(), pool.end());
        sols[i] = lag(view, local, k, std::min(eps, 0.9), std::nullopt,
                      tape.child(kMachineTag).child(r * kStride + i),
                      &stats[i]);
        std::vector<SimCluster::Message> out;
        if (i != 0) out.push_back({0, sols[i].items});
        if (i == 0 && r > 1)
          for (int j = 1; j < cfg.ell; ++j) out.push_back({j, pool});
        return out;
      };
    }
    cluster.run_round(tasks);

    for (const auto& s : stats) failures += s.failures;
    for (const auto& s : sols)
      if (s.value > best.value) best = s;
    std::vector<int> next = union_items(sols);
    std::vector<int> merged;
    std::set_union(pool.begin(), pool.end(), next.begin(), next.end(),
                   std::back_inserter(merged));
    pool = std::move(merged);
    if (static_cast<long>(pool.size()) > cfg.effective_capacity())
      throw CapacityViolationError("solution pool exceeds machine capacity");
  }

  rep.solution = best;
  if (failures > 0) rep.status = "degraded";
  fill_report(rep, inst, before, cluster, k, cfg, eps);
  return rep;
}

RunReport t_dash_opt(const SubmodularInstance& inst, int k, double eps,
                     const ClusterConfig& cfg, const RandomTape& tape,
                     double opt_value, const DistOptions& opts) {
  require_feasible(cfg, "t_dash_opt", k, inst.n(), eps);
  if (!(opt_value > 0.0)) throw ValidationError("opt_value must be > 0");
  RunReport rep;
  rep.algorithm = "t_dash_opt";
  Snapshot before = snap(inst);

  const double tau = (3.0 / 8.0) * opt_value / k;
  ThreshSeqParams params;
  params.k = k;
  params.delta = 1.0 / (cfg.ell + 1);
  params.eps = eps;
  params.tau = tau;

  SimCluster cluster(cfg, inst);
  cluster.set_partition(
      partition_independent(inst.ground(), cfg, tape, opts.universe));

  std::vector<OrderedSolution> sols(cfg.ell);
  std::vector<SimCluster::Task> round1(cfg.ell);
  for (int i = 0; i < cfg.ell; ++i) {
    round1[i] = [&, i](MachineState& m, const SubmodularInstance& view)
        -> std::vector<SimCluster::Message> {
      sols[i] = thresh_seq_mod(view, m.local_elements, params,
                               tape.child(kMachineTag).child(i));
      m.local_elements = sols[i].items;
      if (i == 0) return {};
      return {{0, sols[i].items}};
    };
  }
  cluster.run_round(round1);

  int winner = -1;
  for (int i = 0; i < cfg.ell && winner < 0; ++i)
    if (sols[i].size() == k) winner = i;

  int failures = 0;
  for (const auto& s : sols)
    if (s.status == OrderedSolution::Status::failure) ++failures;

  OrderedSolution result;
  std::vector<SimCluster::Task> round2(cfg.ell);
  round2[0] = [&](MachineState&, const SubmodularInstance& view)
      -> std::vector<SimCluster::Message> {
    if (winner >= 0) {
      result = sols[winner];
      return {};
    }
    ThreshSeqParams p2 = params;
    p2.k = k - sols[0].size();
    SubmodularInstance g = view.restrict_to_marginal(sols[0].items);
    OrderedSolution t = thresh_seq_mod(g, union_items(sols), p2,
                                       tape.child(kPrimaryTag));
    if (t.status == OrderedSolution::Status::failure) ++failures;
    result = sols[0];
    for (int e : t.items) result.items.push_back(e);
    result.value += t.value;
    return {};
  };
  cluster.run_round(round2);

  rep.solution = result;
  if (failures > 0) rep.status = "degraded";
  fill_report(rep, inst, before, cluster, k, cfg, eps);
  return rep;
}

RunReport t_dash(const SubmodularInstance& inst, int k, double eps,
                 const ClusterConfig& cfg, const RandomTape& tape,
                 const DistOptions& opts) {
  require_feasible(cfg, "t_dash", k, inst.n(), eps);
  RunReport rep;
  rep.algorithm = "t_dash";
  Snapshot before = snap(inst);

  const double alpha = 3.0 / 8.0;
  const int guesses =
      k > 1 ? static_cast<int>(
                  std::ceil(std::log(k) / std::log(1.0 + eps))) : 0;
  ThreshSeqParams base_params;
  base_params.k = k;
  base_params.delta = 1.0 / (cfg.ell + 1);
  base_params.eps = eps;

  SimCluster cluster(cfg, inst);
  cluster.set_partition(
      partition_independent(inst.ground(), cfg, tape, opts.universe));

  struct Guess {
    double tau = 0.0;
    OrderedSolution sol;
  };
  std::vector<std::vector<Guess>> machine_guesses(cfg.ell);
  std::vector<double> delta_star(cfg.ell, -1.0);
  std::atomic<int> failures{0};

  std::vector<SimCluster::Task> round1(cfg.ell);
  for (int i = 0; i < cfg.ell; ++i) {
    round1[i] = [&, i](MachineState& m, const SubmodularInstance& view)
        -> std::vector<SimCluster::Message> {
      if (m.local_elements.empty()) return {};
      auto singles = view.marginal_batch({}, m.local_elements);
      delta_star[i] = *std::max_element(singles.begin(), singles.end());
      if (delta_star[i] <= 0.0) return {};
      auto& out = machine_guesses[i];
      out.resize(guesses + 1);
      parallel_strands(view, guesses + 1,
                       [&](int j, const SubmodularInstance& strand) {
        ThreshSeqParams p = base_params;
        p.tau = alpha * delta_star[i] / k * std::pow(1.0 + eps, j);
        out[j].tau = p.tau;
        out[j].sol = thresh_seq_mod(
            strand, m.local_elements, p,
            tape.child(kMachineTag).child(i * kStride + j));
      });
      std::vector<SimCluster::Message> msgs;
      std::vector<OrderedSolution> own;
      for (const auto& g : out) {
        if (g.sol.status == OrderedSolution::Status::failure) ++failures;
        if (i != 0) msgs.push_back({0, g.sol.items});
        own.push_back(g.sol);
      }
      m.local_elements = union_items(own);
      return msgs;
    };
  }
  cluster.run_round(round1);

  double dstar = -1.0;
  for (double d : delta_star) dstar = std::max(dstar, d);

  OrderedSolution best;
  std::vector<SimCluster::Task> round2(cfg.ell);
  round2[0] = [&](MachineState&, const SubmodularInstance& view)
      -> std::vector<SimCluster::Message> {
    if (dstar <= 0.0) return {};
    const int bins = guesses + 2;  // x in [0, guesses+1]
    struct BinResult {
      bool used = false;
      OrderedSolution sol;
    };
    std::vector<BinResult> results(bins);
    parallel_strands(view, bins, [&](int x, const SubmodularInstance& strand) {
      double tau_x = alpha * dstar / k * std::pow(1.0 + eps, x);
      double tau_next = alpha * dstar / k * std::pow(1.0 + eps, x + 1);
      std::vector<const OrderedSolution*> members;
      for (int i = 0; i < cfg.ell; ++i)
        for (const auto& g : machine_guesses[i])
          if (g.tau >= tau_x && g.tau <= tau_next)
            members.push_back(&g.sol);
      if (members.empty()) return;
      int pick = tape.child(kSampleTag).draw_int(
          x, static_cast<int>(members.size()));
      const OrderedSolution& anchor = *members[pick];
      std::vector<OrderedSolution> owned;
      owned.reserve(members.size());
      for (const auto* m : members) owned.push_back(*m);
      std::vector<int> bin_union = union_items(owned);
      ThreshSeqParams p = base_params;
      p.k = k - anchor.size();
      p.tau = tau_x;
      SubmodularInstance g = strand.restrict_to_marginal(anchor.items);
      OrderedSolution t =
          thresh_seq_mod(g, bin_union, p, tape.child(kPrimaryTag).child(x));
      if (t.status == OrderedSolution::Status::failure) ++failures;
      results[x].used = true;
      results[x].sol = anchor;
      for (int e : t.items) results[x].sol.items.push_back(e);
      results[x].sol.value += t.value;
    });
    bool any = false;
    for (const auto& r : results) {
      if (!r.used) continue;
      if (!any || r.sol.value > best.value) best = r.sol;
      any = true;
    }
    return {};
  };
  cluster.run_round(round2);

  rep.solution = best;
  if (failures.load() > 0) rep.status = "degraded";
  fill_report(rep, inst, before, cluster, k, cfg, eps);
  return rep;
}

RunReport l_dist(const SubmodularInstance& inst, int k, double eps,
                 const ClusterConfig& cfg, const RandomTape& tape,
                 const DistOptions& opts) {
  require_feasible(cfg, "l_dist", k, inst.n(), eps);
  RunReport rep;
  rep.algorithm = "l_dist";
  Snapshot before = snap(inst);

  SimCluster cluster(cfg, inst);
  cluster.set_partition(
      partition_uniform(inst.ground(), cfg, tape, opts.universe));

  std::vector<OrderedSolution> sols(cfg.ell);
  std::vector<SimCluster::Task> round1(cfg.ell);
  for (int i = 0; i < cfg.ell; ++i) {
    round1[i] = [&, i](MachineState& m, const SubmodularInstance& view)
        -> std::vector<SimCluster::Message> {
      if (m.local_elements.empty()) return {};
      sols[i] = ltc(view, m.local_elements, k,
                    tape.child(kMachineTag).child(i));
      m.local_elements = sols[i].items;
      if (i == 0) return {};
      return {{0, sols[i].items}};
    };
  }
  cluster.run_round(round1);

  OrderedSolution result;
  std::vector<SimCluster::Task> round2(cfg.ell);
  round2[0] = [&](MachineState&, const SubmodularInstance& view)
      -> std::vector<SimCluster::Message> {
    OrderedSolution t1 =
        ltc(view, union_items(sols), k, tape.child(kPrimaryTag));
    OrderedSolution t1_top = last_k(view, t1, k);
    OrderedSolution t2 =
        threshold_greedy(view, k, {t1_top.value, 0.5}, eps, t1.items);
    OrderedSolution s1_top = last_k(view, sols[0], k);
    std::vector<const OrderedSolution*> candidates{&s1_top, &t1_top, &t2};
    result = pick_best(candidates);
    return {};
  };
  cluster.run_round(round2);

  rep.solution = result;
  fill_report(rep, inst, before, cluster, k, cfg, eps);
  return rep;
}

RunReport rand_greedi(const SubmodularInstance& inst, int k,
                      const ClusterConfig& cfg, const RandomTape& tape,
                      const DistOptions& opts) {
  require_feasible(cfg, "rand_greedi", k, inst.n(), 0.0);
  RunReport rep;
  rep.algorithm = "rand_greedi";
  Snapshot before = snap(inst);

  SimCluster cluster(cfg, inst);
  cluster.set_partition(
      partition_uniform(inst.ground(), cfg, tape, opts.universe));

  std::vector<OrderedSolution> sols(cfg.ell);
  std::vector<SimCluster::Task> round1(cfg.ell);
  for (int i = 0; i < cfg.ell; ++i) {
    round1[i] = [&, i](MachineState& m, const SubmodularInstance& view)
        -> std::vector<SimCluster::Message> {
      sols[i] = greedy(view, k, m.local_elements);
      m.local_elements = sols[i].items;
      if (i == 0) return {};
      return {{0, sols[i].items}};
    };
  }
  cluster.run_round(round1);

  OrderedSolution merged;
  std::vector<SimCluster::Task> round2(cfg.ell);
  round2[0] = [&](MachineState&, const SubmodularInstance& view)
      -> std::vector<SimCluster::Message> {
    merged = greedy(view, k, union_items(sols));
    return {};
  };
  cluster.run_round(round2);

  std::vector<const OrderedSolution*> candidates{&merged, &sols[0]};
  if (opts.best_of_all_machines)
    for (int i = 1; i < cfg.ell; ++i) candidates.push_back(&sols[i]);
  rep.solution = pick_best(candidates);
  fill_report(rep, inst, before, cluster, k, cfg, 0.0);
  return rep;
}

std::string med_component_name(MedComponent c) {
  switch (c) {
    case MedComponent::RDash: return "r_dash";
    case MedComponent::GDash: return "g_dash";
    case MedComponent::TDash: return "t_dash";
    case MedComponent::LDist: return "l_dist";
    case MedComponent::RandGreedi: return "rand_greedi";
  }
  return "?";
}

RunReport med(const SubmodularInstance& inst, int k, const ClusterConfig& cfg,
              MedComponent component, double eps, const RandomTape& tape) {
  const bool summary_ok = inst.objective().supports_summary();
  require_feasible(cfg, "med", k, inst.n(), eps, summary_ok);

  const std::string comp_name = med_component_name(component);
  int k_prime = static_cast<int>(cfg.psi / cfg.ell);
  while (k_prime >= 1 &&
         !check_constraint_feasibility(cfg, comp_name, k_prime, inst.n(), eps,
                                       summary_ok)
              .feasible)
    --k_prime;
  if (k_prime < 1)
    throw InfeasibleError("med: no feasible inner constraint for " +
                          comp_name);

  RunReport rep;
  rep.algorithm = "med+" + comp_name;
  Snapshot before = snap(inst);

  const int m = (k + k_prime - 1) / k_prime;
  auto subtapes = tape.split(m);

  OrderedSolution acc;
  long mr_rounds = 0;
  long communicated = 0;
  bool degraded = false;

  std::vector<uint8_t> in_acc(inst.n(), 0);
  for (int i = 0; i < m; ++i) {
    int ki = std::min(k_prime, k - acc.size());
    if (ki <= 0) break;

    std::vector<int> universe;
    universe.reserve(inst.n() - acc.size());
    for (int e = 0; e < inst.n(); ++e)
      if (!in_acc[e]) universe.push_back(e);

    if (!summary_ok) {
      // The running solution rides along to every machine.
      long rider = static_cast<long>(acc.items.size());
      long part_estimate =
          (static_cast<long>(universe.size()) + cfg.ell - 1) / cfg.ell;
      if (rider + part_estimate > cfg.effective_capacity())
        throw CapacityViolationError(
            "med: solution plus partition exceeds machine capacity");
      communicated += rider * (cfg.ell - 1);
    }

    SubmodularInstance wrapped = inst.restrict_to_marginal(acc.items);
    DistOptions opts;
    opts.universe = std::move(universe);

    RunReport sub;
    switch (component) {
      case MedComponent::RDash:
        sub = r_dash(wrapped, ki, eps, cfg, subtapes[i], opts);
        break;
      case MedComponent::GDash:
        sub = g_dash(wrapped, ki, eps, cfg, subtapes[i], opts);
        break;
      case MedComponent::TDash:
        sub = t_dash(wrapped, ki, eps, cfg, subtapes[i], opts);
        break;
      case MedComponent::LDist:
        sub = l_dist(wrapped, ki, eps, cfg, subtapes[i], opts);
        break;
      case MedComponent::RandGreedi:
        sub = rand_greedi(wrapped, ki, cfg, subtapes[i], opts);
        break;
    }
    mr_rounds += sub.mr_rounds;
    communicated += sub.elements_communicated;
    if (sub.status != "ok") degraded = true;
    for (int e : sub.solution.items) {
      if (in_acc[e]) continue;
      in_acc[e] = 1;
      acc.items.push_back(e);
    }
    acc.value += sub.solution.value;
  }

  Snapshot after = snap(inst);
  rep.solution = acc;
  rep.queries = after.queries - before.queries;
  rep.adaptive_rounds = after.rounds - before.rounds;
  rep.mr_rounds = mr_rounds;
  rep.elements_communicated = communicated;
  rep.n = inst.n();
  rep.k = k;
  rep.ell = cfg.ell;
  rep.psi = cfg.psi;
  rep.eps = eps;
  if (degraded) rep.status = "degraded";
  return rep;
}

}  // namespace smcc
