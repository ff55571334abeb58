#include "smcc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "smcc/data.hpp"

namespace smcc {
namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

MedComponent parse_med_component(const std::string& name) {
  if (name == "r_dash") return MedComponent::RDash;
  if (name == "g_dash") return MedComponent::GDash;
  if (name == "t_dash") return MedComponent::TDash;
  if (name == "l_dist") return MedComponent::LDist;
  if (name == "rand_greedi") return MedComponent::RandGreedi;
  throw ValidationError("unknown med component '" + name + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  if (algorithms.empty()) throw ValidationError("no algorithms configured");
  if (k_list.empty()) throw ValidationError("k list must be nonempty");
  for (int k : k_list)
    if (k < 1) throw ValidationError("k values must be >= 1");
  if (!(eps > 0.0 && eps <= 1.0))
    throw ValidationError("eps must be in (0,1]");
  if (ell < 1) throw ValidationError("ell must be >= 1");
  if (timeout_s <= 0.0) throw ValidationError("timeout must be positive");
}

SubmodularInstance build_instance(const ExperimentConfig& config) {
  const std::string& kind = config.objective;
  if (!config.dataset.empty()) {
    if (ends_with(config.dataset, ".csv")) {
      if (kind != "imagesumm")
        throw ValidationError("similarity csv is only for imagesumm");
      SimilarityData sim = load_similarity_csv(config.dataset);
      return SubmodularInstance(make_image_summ(sim.n, std::move(sim.matrix)));
    }
    GraphData graph =
        load_edge_list(config.dataset, kind == "revenuemax");
    Adjacency adj = build_adjacency(graph);
    if (kind == "maxcover")
      return SubmodularInstance(make_max_cover(std::move(adj)));
    if (kind == "influencemax")
      return SubmodularInstance(
          make_influence_max(std::move(adj), config.influence_p));
    if (kind == "revenuemax")
      return SubmodularInstance(
          make_revenue_max(std::move(adj), config.revenue_alpha));
    throw ValidationError("objective '" + kind + "' needs a generator");
  }
  if (config.generator == "ba") {
    GraphData graph = generate_ba(config.gen_n, config.gen_m, config.gen_seed);
    Adjacency adj = build_adjacency(graph);
    if (kind == "maxcover")
      return SubmodularInstance(make_max_cover(std::move(adj)));
    if (kind == "influencemax")
      return SubmodularInstance(
          make_influence_max(std::move(adj), config.influence_p));
    if (kind == "revenuemax")
      return SubmodularInstance(
          make_revenue_max(std::move(adj), config.revenue_alpha));
    throw ValidationError("ba generator does not fit objective '" + kind +
                          "'");
  }
  if (config.generator == "random")
    return generate_random_instance(kind, config.gen_n, config.gen_density,
                                    config.gen_seed);
  throw ValidationError("unknown generator '" + config.generator + "'");
}

int capped_parallelism(int requested) {
  const char* env = std::getenv("DASH_SMCC_THREADS");
  if (!env) return std::max(1, requested);
  int cap = std::atoi(env);
  if (cap < 1) cap = 1;
  return std::max(1, std::min(requested, cap));
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config,
                                          const SubmodularInstance& inst) {
  config.validate();
  const int n = inst.n();

  ClusterConfig cfg;
  cfg.ell = config.ell;
  cfg.capacity_slack = config.capacity_slack;
  if (config.psi > 0) {
    cfg.psi = config.psi;
  } else {
    // auto: ceil(n/ell) * slack, slack already folded in
    cfg.psi = static_cast<long>(
        std::ceil(std::ceil(static_cast<double>(n) / config.ell) *
                  config.capacity_slack));
    cfg.capacity_slack = 1.0;
  }
  cfg.parallelism = capped_parallelism(config.parallelism);

  struct Job {
    std::string algo;
    int k;
    uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& algo : config.algorithms)
    for (int k : config.k_list)
      for (uint64_t seed : config.seeds) jobs.push_back({algo, k, seed});

  std::vector<ExperimentRow> rows(jobs.size());
  std::atomic<size_t> next{0};

  auto run_one = [&](const Job& job, ExperimentRow& row) {
    row.algo = job.algo;
    row.objective = config.objective;
    row.n = n;
    row.k = job.k;
    row.ell = config.ell;
    row.eps = config.eps;
    row.seed = job.seed;

    Deadline deadline = Deadline::after_seconds(config.timeout_s);
    auto ledger = std::make_shared<QueryLedger>();
    SubmodularInstance run_inst = inst.with_ledger(ledger);
    run_inst.set_deadline(&deadline);
    RandomTape tape(job.seed);
    DistOptions opts;
    opts.best_of_all_machines = config.best_of_all_machines;

    auto start = std::chrono::steady_clock::now();
    try {
      if (job.algo == "greedy" || job.algo == "lag") {
        OrderedSolution sol;
        if (job.algo == "greedy") {
          sol = greedy(run_inst, job.k);
        } else {
          std::vector<int> all(n);
          for (int i = 0; i < n; ++i) all[i] = i;
          LagStats stats;
          sol = lag(run_inst, all, job.k, config.eps, std::nullopt, tape,
                    &stats);
          if (stats.failures > 0) row.status = "degraded";
        }
        row.value = sol.value;
        row.queries = ledger->queries.load();
        row.adaptive_rounds = ledger->adaptive_rounds.load();
      } else {
        RunReport rep;
        if (job.algo == "rand_greedi") {
          rep = rand_greedi(run_inst, job.k, cfg, tape, opts);
        } else if (job.algo == "r_dash") {
          rep = r_dash(run_inst, job.k, config.eps, cfg, tape, opts);
        } else if (job.algo == "g_dash") {
          rep = g_dash(run_inst, job.k, config.eps, cfg, tape, opts);
        } else if (job.algo == "t_dash") {
          rep = t_dash(run_inst, job.k, config.eps, cfg, tape, opts);
        } else if (job.algo == "t_dash_opt") {
          if (!(config.opt_value > 0.0))
            throw ValidationError("t_dash_opt needs opt_value");
          rep = t_dash_opt(run_inst, job.k, config.eps, cfg, tape,
                           config.opt_value, opts);
        } else if (job.algo == "l_dist") {
          rep = l_dist(run_inst, job.k, config.eps, cfg, tape, opts);
        } else if (job.algo.rfind("med+", 0) == 0) {
          rep = med(run_inst, job.k, cfg,
                    parse_med_component(job.algo.substr(4)), config.eps,
                    tape);
        } else {
          throw ValidationError("unknown algorithm '" + job.algo + "'");
        }
        row.value = rep.solution.value;
        row.queries = rep.queries;
        row.adaptive_rounds = rep.adaptive_rounds;
        row.mr_rounds = rep.mr_rounds;
        row.elements_communicated = rep.elements_communicated;
        row.status = rep.status;
      }
    } catch (const InfeasibleError&) {
      row.status = "infeasible";
    } catch (const TimeoutError&) {
      row.status = "timeout";
    } catch (const Error& e) {
      row.status = std::string("error:") + e.what();
    }
    row.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  };

  int workers = capped_parallelism(config.parallelism);
  if (workers <= 1 || jobs.size() <= 1) {
    for (size_t i = 0; i < jobs.size(); ++i) run_one(jobs[i], rows[i]);
  } else {
    auto worker = [&] {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= jobs.size()) return;
        run_one(jobs[i], rows[i]);
      }
    };
    std::vector<std::thread> pool;
    int count = std::min<int>(workers, static_cast<int>(jobs.size()));
    pool.reserve(count);
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config) {
  SubmodularInstance inst = build_instance(config);
  return run_experiment(config, inst);
}

std::string experiment_csv_header() {
  return "algo,objective,n,k,ell,eps,seed,value,queries,adaptive_rounds,"
         "mr_rounds,elements_communicated,wall_ms,status";
}

std::string experiment_csv_row(const ExperimentRow& row) {
  std::string status = row.status;  // keep the csv one-cell-per-column
  std::replace(status.begin(), status.end(), ',', ';');
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%s,%s,%d,%d,%d,%.10g,%llu,%.12g,%ld,%ld,%ld,%ld,%ld,%s",
                row.algo.c_str(), row.objective.c_str(), row.n, row.k,
                row.ell, row.eps, static_cast<unsigned long long>(row.seed),
                row.value, row.queries, row.adaptive_rounds, row.mr_rounds,
                row.elements_communicated, row.wall_ms, status.c_str());
  return buf;
}

std::string experiment_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  out << experiment_csv_header() << "\n";
  for (const auto& row : rows) out << experiment_csv_row(row) << "\n";
  return out.str();
}

}  // namespace smcc
