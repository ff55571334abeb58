#include "smcc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "smcc/data.hpp"

namespace smcc {
namespace {

long binomial_guarded(int n, int k, long guard) {
  double acc = 1.0;
  for (int i = 1; i <= k; ++i) {
    acc *= static_cast<double>(n - k + i) / i;
    if (acc > static_cast<double>(guard) * 4) return guard + 1;
  }
  return static_cast<long>(std::llround(acc));
}

std::string join(std::span<const int> v) {
  std::ostringstream ss;
  for (size_t i = 0; i < v.size(); ++i) ss << (i ? "," : "") << v[i];
  return ss.str();
}

struct AlgRun {
  OrderedSolution sol;
  bool success = true;
  bool errored = false;
};

AlgRun run_rcp_algorithm(RcpAlgorithm algorithm,
                         const SubmodularInstance& inst,
                         std::span<const int> input, const RcpParams& params,
                         const RandomTape& tape) {
  AlgRun out;
  try {
    switch (algorithm) {
      case RcpAlgorithm::ThreshSeq: {
        ThreshSeqParams p;
        p.k = params.k;
        p.delta = params.delta;
        p.eps = params.eps;
        p.tau = params.tau;
        out.sol = thresh_seq_mod(inst, input, p, tape);
        out.success = out.sol.status == OrderedSolution::Status::success;
        break;
      }
      case RcpAlgorithm::Lag: {
        LagStats stats;
        out.sol = lag(inst, input, params.k, params.eps, std::nullopt, tape,
                      &stats);
        out.success = stats.failures == 0;
        break;
      }
      case RcpAlgorithm::Ltc: {
        out.sol = ltc(inst, input, params.k, tape);
        out.success = true;
        break;
      }
    }
  } catch (const Error&) {
    out.errored = true;
    out.success = false;
  }
  return out;
}

}  // namespace

BruteForceResult brute_force_opt(const SubmodularInstance& inst, int k) {
  const int n = inst.n();
  k = std::min(k, n);
  constexpr long kGuard = 10'000'000;
  if (binomial_guarded(n, k, kGuard) > kGuard)
    throw TooLargeError("brute force guard exceeded");

  BruteForceResult result;
  if (k == 0) {
    result.enumerated = 1;
    return result;
  }
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  for (;;) {
    ++result.enumerated;
    double v = inst.raw_value(pick);
    if (v > result.opt_value ||
        (result.opt_set.empty() && result.enumerated == 1)) {
      result.opt_value = v;
      result.opt_set = pick;
    }
    // next lexicographic combination
    int i = k - 1;
    while (i >= 0 && pick[i] == n - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return result;
}

std::string rcp_algorithm_name(RcpAlgorithm a) {
  switch (a) {
    case RcpAlgorithm::ThreshSeq: return "thresh_seq_mod";
    case RcpAlgorithm::Lag: return "lag";
    case RcpAlgorithm::Ltc: return "ltc";
  }
  return "?";
}

RcpTrial rcp_trial(RcpAlgorithm algorithm, const SubmodularInstance& inst,
                   std::span<const int> a, std::span<const int> b,
                   const RcpParams& params, const RandomTape& tape) {
  RcpTrial trial;
  trial.algorithm = rcp_algorithm_name(algorithm);
  trial.a.assign(a.begin(), a.end());
  trial.b.assign(b.begin(), b.end());

  AlgRun base = run_rcp_algorithm(algorithm, inst, a, params, tape);
  if (!base.success) {
    trial.verdict = RcpTrial::Verdict::precondition_unmet;
    trial.details = "run on A did not terminate successfully";
    return trial;
  }
  std::vector<int> extended(a.begin(), a.end());
  for (int elem : b) {
    extended.push_back(elem);
    AlgRun single = run_rcp_algorithm(algorithm, inst, extended, params, tape);
    extended.pop_back();
    if (single.sol.contains(elem)) {
      trial.verdict = RcpTrial::Verdict::precondition_unmet;
      trial.details = "element survives alone";
      return trial;
    }
  }
  extended.insert(extended.end(), b.begin(), b.end());
  AlgRun full = run_rcp_algorithm(algorithm, inst, extended, params, tape);
  if (!full.success) {
    trial.verdict = RcpTrial::Verdict::violated;
    trial.details = "run on A∪B failed while run on A succeeded";
    return trial;
  }
  if (!full.sol.same_as(base.sol)) {
    trial.verdict = RcpTrial::Verdict::violated;
    trial.details = "A -> [" + join(base.sol.items) + "] but A∪B -> [" +
                    join(full.sol.items) + "]";
    return trial;
  }
  trial.verdict = RcpTrial::Verdict::holds;
  return trial;
}

namespace {

void tally(RcpSuiteResult& res, const RcpTrial& trial) {
  ++res.trials;
  switch (trial.verdict) {
    case RcpTrial::Verdict::holds: ++res.holds; break;
    case RcpTrial::Verdict::precondition_unmet: ++res.unmet; break;
    case RcpTrial::Verdict::violated:
      ++res.violations;
      if (res.first_violation.empty())
        res.first_violation = trial.algorithm + " A=[" + join(trial.a) +
                              "] B=[" + join(trial.b) + "]: " + trial.details;
      break;
  }
}

}  // namespace

RcpSuiteResult rcp_random_suite(RcpAlgorithm algorithm, int trials,
                                uint64_t seed, int max_n, int max_k) {
  RcpSuiteResult res;
  RandomTape root(seed);
  const char* families[] = {"maxcover", "revenuemax", "influencemax"};
  for (int t = 0; t < trials; ++t) {
    RandomTape tt = root.child(t);
    int n = 6 + tt.draw_int(0, std::max(1, max_n - 5));
    double density = 0.08 + 0.35 * tt.draw_unit(1);
    const char* family = families[tt.draw_int(2, 3)];
    SubmodularInstance inst =
        generate_random_instance(family, n, density, tt.draw_u64(3));

    RcpParams params;
    params.k = 1 + tt.draw_int(4, std::min(max_k, std::max(1, n / 2)));
    params.eps = 0.1 + 0.5 * tt.draw_unit(5);
    params.delta = 0.1 + 0.5 * tt.draw_unit(6);

    // Bias B toward low-value singletons so the hypothesis usually holds.
    auto singles = inst.marginal_batch({}, [&] {
      std::vector<int> all(n);
      for (int i = 0; i < n; ++i) all[i] = i;
      return all;
    }());
    double max_single = *std::max_element(singles.begin(), singles.end());
    params.tau = (0.3 + 0.6 * tt.draw_unit(7)) * max_single;

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return singles[x] < singles[y]; });

    std::vector<int> a, b;
    int b_budget = 1 + tt.draw_int(8, 3);
    uint64_t draw = 16;
    for (int i = 0; i < n; ++i) {
      int e = order[i];
      bool low_half = i < n / 2;
      double p_b = low_half ? 0.35 : 0.08;
      double u = tt.draw_unit(draw++);
      if (static_cast<int>(b.size()) < b_budget && u < p_b)
        b.push_back(e);
      else if (u < 0.75)
        a.push_back(e);
    }
    if (a.empty()) a.push_back(order[n - 1]);

    tally(res, rcp_trial(algorithm, inst, a, b, params, tt.child(99)));
  }
  return res;
}

RcpSuiteResult rcp_exhaustive_suite(RcpAlgorithm algorithm,
                                    const SubmodularInstance& inst,
                                    const RcpParams& params,
                                    const RandomTape& tape) {
  RcpSuiteResult res;
  const int n = inst.n();
  if (n > 12) throw TooLargeError("exhaustive suite limited to n <= 12");
  std::vector<int> a, b;
  long total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  for (long code = 0; code < total; ++code) {
    a.clear();
    b.clear();
    long c = code;
    for (int e = 0; e < n; ++e, c /= 3) {
      int slot = static_cast<int>(c % 3);
      if (slot == 1) a.push_back(e);
      if (slot == 2) b.push_back(e);
    }
    tally(res, rcp_trial(algorithm, inst, a, b, params, tape));
  }
  return res;
}

double theoretical_ratio(const std::string& algorithm, double eps) {
  const double e_inv = std::exp(-1.0);
  if (algorithm == "greedy") return 1.0 - e_inv;
  if (algorithm == "threshold_greedy") return 1.0 - e_inv - eps;
  if (algorithm == "lag") return 1.0 - e_inv - eps;
  if (algorithm == "rand_greedi") return 0.5 * (1.0 - e_inv);
  if (algorithm == "r_dash") return 0.5 * (1.0 - e_inv - eps);
  if (algorithm == "g_dash") return 1.0 - e_inv - eps;
  if (algorithm == "t_dash_opt" || algorithm == "t_dash")
    return 3.0 / 8.0 - eps;
  if (algorithm == "l_dist") return 1.0 / 8.0;
  if (algorithm == "med+rand_greedi")
    return 1.0 - std::exp(-0.5 * (1.0 - e_inv));
  throw ValidationError("no ratio known for '" + algorithm + "'");
}

RatioRow ratio_run(const RatioConfig& config) {
  RatioRow row;
  row.config = config;
  row.bound = theoretical_ratio(config.algorithm, config.eps);

  SubmodularInstance inst = generate_random_instance(
      config.family, config.n, config.density, config.instance_seed);
  BruteForceResult opt = brute_force_opt(inst, config.k);
  row.opt = opt.opt_value;
  if (row.opt <= 0.0) {
    row.pass = true;
    return row;
  }

  ClusterConfig cfg;
  cfg.ell = config.ell;
  cfg.psi = config.psi > 0 ? config.psi
                           : 2L * config.n + config.ell * config.k;
  cfg.capacity_slack = config.capacity_slack;
  cfg.parallelism = 1;

  double total = 0.0;
  int counted = 0;
  for (int s = 0; s < config.seeds; ++s) {
    RandomTape tape(config.instance_seed * 1000003 + s);
    double value = 0.0;
    bool degraded = false;
    const std::string& alg = config.algorithm;
    if (alg == "greedy") {
      value = greedy(inst, config.k).value;
    } else if (alg == "threshold_greedy") {
      value = threshold_greedy(inst, config.k, {opt.opt_value, 1.0},
                               config.eps)
                  .value;
    } else if (alg == "lag") {
      LagStats st;
      std::vector<int> all(config.n);
      for (int i = 0; i < config.n; ++i) all[i] = i;
      value = lag(inst, all, config.k, config.eps, std::nullopt, tape, &st)
                  .value;
      degraded = st.failures > 0;
    } else {
      RunReport rep;
      if (alg == "rand_greedi") {
        rep = rand_greedi(inst, config.k, cfg, tape);
      } else if (alg == "r_dash") {
        rep = r_dash(inst, config.k, config.eps, cfg, tape);
      } else if (alg == "g_dash") {
        rep = g_dash(inst, config.k, config.eps, cfg, tape);
      } else if (alg == "t_dash_opt") {
        rep = t_dash_opt(inst, config.k, config.eps, cfg, tape,
                         opt.opt_value);
      } else if (alg == "t_dash") {
        rep = t_dash(inst, config.k, config.eps, cfg, tape);
      } else if (alg == "l_dist") {
        rep = l_dist(inst, config.k, config.eps, cfg, tape);
      } else if (alg == "med+rand_greedi") {
        rep = med(inst, config.k, cfg, MedComponent::RandGreedi, config.eps,
                  tape);
      } else {
        throw ValidationError("unknown ratio algorithm '" + alg + "'");
      }
      value = rep.solution.value;
      degraded = rep.status == "degraded";
    }
    if (degraded) {
      ++row.degraded_runs;
      continue;
    }
    total += value;
    ++counted;
  }
  row.mean_value = counted > 0 ? total / counted : 0.0;
  row.pass = row.mean_value >= config.slack * row.bound * row.opt &&
             row.degraded_runs <= config.seeds / 10;
  return row;
}

std::string ratio_csv_header() {
  return "algo,family,n,k,eps,seeds,opt,bound,mean_value,degraded,pass";
}

std::string ratio_csv_row(const RatioRow& row) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s,%s,%d,%d,%.4g,%d,%.10g,%.10g,%.10g,%d,%d",
                row.config.algorithm.c_str(), row.config.family.c_str(),
                row.config.n, row.config.k, row.config.eps, row.config.seeds,
                row.opt, row.bound, row.mean_value, row.degraded_runs,
                row.pass ? 1 : 0);
  return buf;
}

SubmodularityReport submodularity_check(const SubmodularInstance& inst,
                                        int trials, uint64_t seed) {
  SubmodularityReport report;
  const int n = inst.n();
  auto subset_of = [&](uint32_t mask) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(i);
    return s;
  };
  auto check = [&](uint32_t mask_a, uint32_t mask_b, int x) {
    std::vector<int> a = subset_of(mask_a), b = subset_of(mask_b);
    double fa = inst.raw_value(a), fb = inst.raw_value(b);
    a.push_back(x);
    b.push_back(x);
    double ga = inst.raw_value(a) - fa;
    double gb = inst.raw_value(b) - fb;
    if (ga < gb - 1e-9) {
      report.ok = false;
      a.pop_back();
      b.pop_back();
      report.counterexample = "x=" + std::to_string(x) + " A=[" + join(a) +
                              "] B=[" + join(b) + "] gains " +
                              std::to_string(ga) + " < " + std::to_string(gb);
      return false;
    }
    return true;
  };

  if (n <= 10) {
    for (uint32_t mask_b = 0; mask_b < (1u << n); ++mask_b) {
      // every A ⊆ B via submask walk
      uint32_t mask_a = mask_b;
      for (;;) {
        for (int x = 0; x < n; ++x)
          if (!(mask_b & (1u << x)) && !check(mask_a, mask_b, x))
            return report;
        if (mask_a == 0) break;
        mask_a = (mask_a - 1) & mask_b;
      }
    }
    return report;
  }

  RandomTape tape(seed);
  uint64_t draw = 0;
  for (int t = 0; t < trials; ++t) {
    std::vector<int> b_set, a_set;
    int x = tape.draw_int(draw++, n);
    for (int i = 0; i < n; ++i) {
      if (i == x) continue;
      double u = tape.draw_unit(draw++);
      if (u < 0.3) {
        b_set.push_back(i);
        if (tape.draw_unit(draw++) < 0.5) a_set.push_back(i);
      }
    }
    double fa = inst.raw_value(a_set), fb = inst.raw_value(b_set);
    a_set.push_back(x);
    b_set.push_back(x);
    double ga = inst.raw_value(a_set) - fa;
    double gb = inst.raw_value(b_set) - fb;
    if (ga < gb - 1e-9) {
      report.ok = false;
      report.counterexample = "sampled counterexample at x=" +
                              std::to_string(x);
      return report;
    }
  }
  return report;
}

}  // namespace smcc
