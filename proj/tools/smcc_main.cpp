#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "smcc/data.hpp"
#include "smcc/experiment.hpp"
#include "smcc/verify.hpp"

using json = nlohmann::json;
using namespace smcc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitVerification = 4;

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void apply_config_file(const std::string& path, ExperimentConfig& config) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  json j = json::parse(in);
  if (j.contains("algorithms"))
    config.algorithms = j["algorithms"].get<std::vector<std::string>>();
  if (j.contains("objective")) config.objective = j["objective"];
  if (j.contains("dataset")) config.dataset = j["dataset"];
  if (j.contains("generator")) {
    const auto& g = j["generator"];
    config.generator = g.value("type", config.generator);
    config.gen_n = g.value("n", config.gen_n);
    config.gen_m = g.value("m", config.gen_m);
    config.gen_density = g.value("density", config.gen_density);
    config.gen_seed = g.value("seed", config.gen_seed);
  }
  if (j.contains("influence_p")) config.influence_p = j["influence_p"];
  if (j.contains("revenue_alpha")) config.revenue_alpha = j["revenue_alpha"];
  if (j.contains("k")) config.k_list = j["k"].get<std::vector<int>>();
  if (j.contains("eps")) config.eps = j["eps"];
  if (j.contains("ell")) config.ell = j["ell"];
  if (j.contains("psi")) {
    if (j["psi"].is_string()) {
      if (j["psi"] != "auto")
        throw ValidationError("psi must be a number or \"auto\"");
      config.psi = 0;
    } else {
      config.psi = j["psi"].get<long>();
    }
  }
  if (j.contains("capacity_slack")) config.capacity_slack = j["capacity_slack"];
  if (j.contains("seeds"))
    config.seeds = j["seeds"].get<std::vector<uint64_t>>();
  if (j.contains("parallelism")) config.parallelism = j["parallelism"];
  if (j.contains("timeout_s")) config.timeout_s = j["timeout_s"];
  if (j.contains("best_of_all_machines"))
    config.best_of_all_machines = j["best_of_all_machines"];
  if (j.contains("opt_value")) config.opt_value = j["opt_value"];
}

int cmd_run(const ExperimentConfig& config, const std::string& out_path) {
  auto rows = run_experiment(config);
  std::string csv = experiment_csv(rows);
  if (out_path.empty() || out_path == "-") {
    std::cout << csv;
  } else {
    std::ofstream out(out_path);
    if (!out) throw ValidationError("cannot write '" + out_path + "'");
    out << csv;
    std::cerr << rows.size() << " rows -> " << out_path << "\n";
  }
  bool all_infeasible =
      !rows.empty() &&
      std::all_of(rows.begin(), rows.end(), [](const ExperimentRow& r) {
        return r.status == "infeasible";
      });
  return all_infeasible ? kExitInfeasible : kExitOk;
}

struct SuiteLog {
  int failures = 0;
  void report(const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!pass) ++failures;
  }
};

int cmd_verify(bool full) {
  SuiteLog log;
  const int rcp_trials = full ? 1000 : 200;

  for (auto algorithm :
       {RcpAlgorithm::ThreshSeq, RcpAlgorithm::Lag, RcpAlgorithm::Ltc}) {
    auto res = rcp_random_suite(algorithm, rcp_trials, 2026, full ? 64 : 32,
                                full ? 8 : 5);
    std::ostringstream detail;
    detail << res.holds << " hold, " << res.unmet << " unmet, "
           << res.violations << " violations";
    log.report("consistency/randomized/" + rcp_algorithm_name(algorithm),
               res.violations == 0, detail.str());
    if (res.violations > 0) std::cout << "  " << res.first_violation << "\n";
  }

  {
    SubmodularInstance inst = generate_random_instance("maxcover", 7, 0.3, 4);
    RcpParams params;
    params.k = 2;
    params.tau = 1.5;
    long violations = 0;
    for (auto algorithm : {RcpAlgorithm::ThreshSeq, RcpAlgorithm::Ltc}) {
      auto res = rcp_exhaustive_suite(algorithm, inst, params, RandomTape(3));
      violations += res.violations;
    }
    log.report("consistency/exhaustive-n7", violations == 0,
               violations == 0 ? "2187 pairs per algorithm" : "violations");
  }

  {
    bool ok = true;
    for (const char* kind :
         {"maxcover", "influencemax", "revenuemax", "imagesumm"}) {
      SubmodularInstance inst = generate_random_instance(kind, 8, 0.35, 17);
      ok = ok && submodularity_check(inst).ok;
    }
    log.report("oracle/submodularity-exhaustive-n8", ok, "4 objectives");
  }

  {
    bool ok = true;
    for (const char* kind :
         {"maxcover", "influencemax", "revenuemax", "imagesumm"}) {
      SubmodularInstance inst = generate_random_instance(kind, 9, 0.3, 23);
      RandomTape tape(55);
      for (int trial = 0; trial < 200 && ok; ++trial) {
        std::vector<int> base, probe;
        for (int e = 0; e < 9; ++e) {
          double u = tape.draw_unit(trial * 64 + e);
          if (u < 0.3)
            base.push_back(e);
          else if (u < 0.55)
            probe.push_back(e);
        }
        auto summary = inst.summarize(base);
        double direct = inst.restrict_to_marginal(base).raw_value(probe);
        double via = eval_with_summary(*summary, probe);
        double tol = 1e-9 * std::max(1.0, std::abs(direct));
        ok = std::abs(via - direct) <= tol;
      }
    }
    log.report("oracle/summary-fidelity", ok, "800 (S,X) pairs");
  }

  {
    const int seeds = full ? 200 : 40;
    std::vector<RatioConfig> configs;
    for (const char* alg : {"greedy", "rand_greedi", "r_dash", "l_dist"}) {
      RatioConfig c;
      c.algorithm = alg;
      c.family = "maxcover";
      c.n = 14;
      c.k = 3;
      c.seeds = alg == std::string("greedy") ? 1 : seeds;
      c.slack = alg == std::string("greedy") ? 1.0 : 0.95;
      configs.push_back(c);
    }
    for (const auto& c : configs) {
      RatioRow row = ratio_run(c);
      std::ostringstream detail;
      detail << "mean " << row.mean_value << " vs bound "
             << row.bound * row.opt;
      log.report("ratio/" + c.algorithm, row.pass, detail.str());
    }
  }

  {
    ExperimentConfig config;
    config.algorithms = {"r_dash", "l_dist"};
    config.generator = "random";
    config.gen_n = 60;
    config.gen_density = 0.1;
    config.gen_seed = 5;
    config.k_list = {3};
    config.eps = 0.2;
    config.ell = 4;
    config.capacity_slack = 1.3;
    config.seeds = {1, 2, 3, 4};
    config.parallelism = 1;
    auto a = run_experiment(config);
    config.parallelism = 4;
    auto b = run_experiment(config);
    bool same = a.size() == b.size();
    for (size_t i = 0; same && i < a.size(); ++i) {
      ExperimentRow x = a[i], y = b[i];
      x.wall_ms = y.wall_ms = 0;
      same = experiment_csv_row(x) == experiment_csv_row(y);
    }
    log.report("determinism/parallelism-1-vs-4", same, "8 runs");
  }

  std::cout << (log.failures == 0 ? "verification passed"
                                  : "verification FAILED")
            << "\n";
  return log.failures == 0 ? kExitOk : kExitVerification;
}

int cmd_report(const std::vector<std::string>& inputs,
               const std::string& out_path) {
  struct Key {
    std::string algo, objective;
    int n, k, ell;
    std::string eps;
    bool operator<(const Key& o) const {
      return std::tie(algo, objective, n, k, ell, eps) <
             std::tie(o.algo, o.objective, o.n, o.k, o.ell, o.eps);
    }
  };
  struct Agg {
    int runs = 0;
    double value_sum = 0, value_min = 0, value_max = 0;
    double queries = 0, rounds = 0, mr = 0, comm = 0, wall = 0;
  };
  std::map<Key, Agg> groups;
  for (const auto& path : inputs) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (first || line.rfind("algo,", 0) == 0) {
        first = false;
        if (line.rfind("algo,", 0) == 0) continue;
      }
      if (line.empty()) continue;
      auto cells = split_list(line);
      if (cells.size() < 14) continue;
      // aggregate completed runs only
      if (cells[13] != "ok" && cells[13] != "degraded") continue;
      Key key{cells[0], cells[1], std::stoi(cells[2]), std::stoi(cells[3]),
              std::stoi(cells[4]), cells[5]};
      Agg& agg = groups[key];
      double value = std::stod(cells[7]);
      if (agg.runs == 0) agg.value_min = agg.value_max = value;
      agg.value_min = std::min(agg.value_min, value);
      agg.value_max = std::max(agg.value_max, value);
      agg.value_sum += value;
      agg.queries += std::stod(cells[8]);
      agg.rounds += std::stod(cells[9]);
      agg.mr += std::stod(cells[10]);
      agg.comm += std::stod(cells[11]);
      agg.wall += std::stod(cells[12]);
      ++agg.runs;
    }
  }
  std::ostringstream out;
  out << "algo,objective,n,k,ell,eps,runs,value_mean,value_min,value_max,"
         "queries_mean,adaptive_rounds_mean,mr_rounds_mean,"
         "elements_communicated_mean,wall_ms_mean\n";
  for (const auto& [key, agg] : groups) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "%s,%s,%d,%d,%d,%s,%d,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,"
                  "%.10g,%.10g\n",
                  key.algo.c_str(), key.objective.c_str(), key.n, key.k,
                  key.ell, key.eps.c_str(), agg.runs,
                  agg.value_sum / agg.runs, agg.value_min, agg.value_max,
                  agg.queries / agg.runs, agg.rounds / agg.runs,
                  agg.mr / agg.runs, agg.comm / agg.runs,
                  agg.wall / agg.runs);
    out << buf;
  }
  if (out_path.empty() || out_path == "-") {
    std::cout << out.str();
  } else {
    std::ofstream f(out_path);
    f << out.str();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"size-constrained submodular maximization toolkit"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run an experiment grid to CSV");
  std::string config_path, algo_csv, dataset, objective, k_csv, seeds_csv;
  std::string psi_str, out_path;
  double eps = -1, timeout_s = -1, capacity_slack = -1;
  int ell = -1, parallelism = -1;
  uint64_t seed_single = 0;
  bool seed_set = false, best_of_all = false;
  std::string gen_type;
  int gen_n = -1, gen_m = -1;
  double gen_density = -1;
  uint64_t gen_seed = 0;
  bool gen_seed_set = false;
  double opt_value = -1;
  run->add_option("--config", config_path, "JSON config file");
  run->add_option("--algo", algo_csv, "comma-separated algorithm list");
  run->add_option("--dataset", dataset, "edge list or similarity csv");
  run->add_option("--objective", objective,
                  "maxcover|influencemax|revenuemax|imagesumm|modular");
  run->add_option("--k", k_csv, "comma-separated k values");
  run->add_option("--eps", eps, "error parameter");
  run->add_option("--ell", ell, "machine count");
  run->add_option("--psi", psi_str, "per-machine capacity or 'auto'");
  run->add_option("--seeds", seeds_csv, "comma-separated seeds");
  run->add_option("--seed", seed_single, "single seed")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_option("--parallelism", parallelism, "worker threads");
  run->add_option("--out", out_path, "output CSV path (default stdout)");
  run->add_option("--timeout-s", timeout_s, "per-run wall budget");
  run->add_option("--capacity-slack", capacity_slack,
                  "capacity slack factor");
  run->add_flag("--best-of-all-machines", best_of_all,
                "argmax over all machine solutions");
  run->add_option("--gen", gen_type, "generator: ba|random");
  run->add_option("--gen-n", gen_n, "generator ground-set size");
  run->add_option("--gen-m", gen_m, "ba attachments per node");
  run->add_option("--gen-density", gen_density, "random edge probability");
  run->add_option("--gen-seed", gen_seed, "generator seed")
      ->each([&](const std::string&) { gen_seed_set = true; });
  run->add_option("--opt-value", opt_value, "known optimum for t_dash_opt");

  // verify
  auto* verify = app.add_subcommand("verify", "run the verification suites");
  bool verify_full = false;
  verify->add_flag("--full", verify_full, "larger trial counts");

  // gen
  auto* gen = app.add_subcommand("gen", "generate datasets");
  auto* gen_ba = gen->add_subcommand("ba", "preferential-attachment graph");
  int ba_n = 1000, ba_m = 2;
  uint64_t ba_seed = 1;
  std::string ba_out = "ba.txt";
  gen_ba->add_option("--n", ba_n)->required();
  gen_ba->add_option("--m", ba_m)->required();
  gen_ba->add_option("--seed", ba_seed);
  gen_ba->add_option("--out", ba_out);
  auto* gen_sim = gen->add_subcommand("sim", "cosine similarity matrix");
  int sim_n = 100, sim_d = 6;
  uint64_t sim_seed = 1;
  std::string sim_out = "sim.csv";
  gen_sim->add_option("--n", sim_n)->required();
  gen_sim->add_option("--d", sim_d);
  gen_sim->add_option("--seed", sim_seed);
  gen_sim->add_option("--out", sim_out);

  // report
  auto* report = app.add_subcommand("report", "aggregate run CSVs");
  std::vector<std::string> report_in;
  std::string report_out;
  report->add_option("--in", report_in, "input CSVs")->required();
  report->add_option("--out", report_out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      ExperimentConfig config;
      if (!config_path.empty()) apply_config_file(config_path, config);
      if (!algo_csv.empty()) config.algorithms = split_list(algo_csv);
      if (!dataset.empty()) config.dataset = dataset;
      if (!objective.empty()) config.objective = objective;
      if (!k_csv.empty()) {
        config.k_list.clear();
        for (const auto& s : split_list(k_csv))
          config.k_list.push_back(std::stoi(s));
      }
      if (eps >= 0) config.eps = eps;
      if (ell >= 0) config.ell = ell;
      if (!psi_str.empty())
        config.psi = psi_str == "auto" ? 0 : std::stol(psi_str);
      if (!seeds_csv.empty()) {
        config.seeds.clear();
        for (const auto& s : split_list(seeds_csv))
          config.seeds.push_back(std::stoull(s));
      }
      if (seed_set) config.seeds = {seed_single};
      if (parallelism >= 0) config.parallelism = parallelism;
      if (timeout_s >= 0) config.timeout_s = timeout_s;
      if (capacity_slack >= 0) config.capacity_slack = capacity_slack;
      if (best_of_all) config.best_of_all_machines = true;
      if (!gen_type.empty()) config.generator = gen_type;
      if (gen_n >= 0) config.gen_n = gen_n;
      if (gen_m >= 0) config.gen_m = gen_m;
      if (gen_density >= 0) config.gen_density = gen_density;
      if (gen_seed_set) config.gen_seed = gen_seed;
      if (opt_value >= 0) config.opt_value = opt_value;
      return cmd_run(config, out_path);
    }
    if (verify->parsed()) return cmd_verify(verify_full);
    if (gen->parsed()) {
      if (gen_ba->parsed()) {
        write_edge_list(ba_out, generate_ba(ba_n, ba_m, ba_seed));
        std::cerr << "wrote " << ba_out << "\n";
        return kExitOk;
      }
      if (gen_sim->parsed()) {
        RandomTape tape(sim_seed);
        std::vector<double> features(size_t(sim_n) * sim_d);
        for (size_t i = 0; i < features.size(); ++i)
          features[i] = tape.draw_unit(i);
        SimilarityData sim;
        sim.n = sim_n;
        sim.matrix.resize(size_t(sim_n) * sim_n);
        for (int i = 0; i < sim_n; ++i)
          for (int j = 0; j < sim_n; ++j) {
            double dot = 0, ni = 0, nj = 0;
            for (int t = 0; t < sim_d; ++t) {
              double a = features[size_t(i) * sim_d + t];
              double b = features[size_t(j) * sim_d + t];
              dot += a * b;
              ni += a * a;
              nj += b * b;
            }
            sim.matrix[size_t(i) * sim_n + j] =
                i == j ? 1.0 : dot / std::sqrt(ni * nj);
          }
        write_similarity_csv(sim_out, sim);
        std::cerr << "wrote " << sim_out << "\n";
        return kExitOk;
      }
      std::cerr << "gen requires a dataset subcommand\n";
      return kExitConfig;
    }
    if (report->parsed()) return cmd_report(report_in, report_out);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
