#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "smcc/experiment.hpp"
#include "smcc/verify.hpp"

using namespace smcc;
using namespace smcc::testing;

namespace {

ClusterConfig make_cfg(int ell, int n, double slack = 1.0,
                       int parallelism = 1) {
  ClusterConfig cfg;
  cfg.ell = ell;
  cfg.psi = n;
  cfg.capacity_slack = slack;
  cfg.parallelism = parallelism;
  return cfg;
}

bool reports_equal(const RunReport& a, const RunReport& b) {
  return a.solution.items == b.solution.items &&
         a.solution.value == b.solution.value && a.queries == b.queries &&
         a.adaptive_rounds == b.adaptive_rounds &&
         a.mr_rounds == b.mr_rounds &&
         a.elements_communicated == b.elements_communicated &&
         a.status == b.status;
}

}  // namespace

TEST_CASE("r_dash degenerate cluster covers the single-machine solution") {
  SubmodularInstance inst = generate_random_instance("maxcover", 30, 0.15, 2);
  RandomTape tape(4);
  RunReport rep = r_dash(inst, 4, 0.2, make_cfg(1, 30), tape);
  CHECK(rep.mr_rounds == 2);
  OrderedSolution direct =
      lag(inst, ids(30), 4, 0.2, std::nullopt, tape.child(1).child(0));
  CHECK(rep.solution.value >= direct.value);
}

TEST_CASE("r_dash at k=1 returns a near-max singleton") {
  SubmodularInstance inst = generate_random_instance("revenuemax", 24, 0.3, 8);
  auto singles = inst.marginal_batch({}, ids(24));
  double top = *std::max_element(singles.begin(), singles.end());
  for (uint64_t seed = 0; seed < 10; ++seed) {
    RunReport rep = r_dash(inst, 1, 0.2, make_cfg(2, 24), RandomTape(seed));
    CHECK(rep.solution.size() <= 1);
    CHECK(rep.solution.value >= (1.0 - 0.2) * top - 1e-9);
  }
}

TEST_CASE("r_dash communication equals the shipped machine solutions") {
  SubmodularInstance inst = generate_random_instance("maxcover", 40, 0.2, 5);
  ClusterConfig cfg = make_cfg(4, 40);
  RandomTape tape(17);
  RunReport rep = r_dash(inst, 3, 0.2, cfg, tape);
  // reconstruct the machine solutions from the same tape addresses
  auto parts = partition_uniform(inst.ground(), cfg, tape);
  long expected = 0;
  for (int i = 1; i < cfg.ell; ++i)
    expected += lag(inst, parts[i], 3, 0.2, std::nullopt,
                    tape.child(1).child(i))
                    .size();
  CHECK(rep.elements_communicated == expected);
  CHECK(rep.elements_communicated <= 40 + 4 * 3);
}

TEST_CASE("infeasible configurations are rejected") {
  SubmodularInstance inst = generate_random_instance("maxcover", 16, 0.2, 1);
  ClusterConfig cfg;
  cfg.ell = 4;
  cfg.psi = 4;
  CHECK_THROWS_AS(r_dash(inst, 2, 0.2, cfg, RandomTape(1)), InfeasibleError);
  CHECK_THROWS_AS(l_dist(inst, 2, 0.2, cfg, RandomTape(1)), InfeasibleError);
}

TEST_CASE("g_dash round count follows eps") {
  SubmodularInstance inst = generate_random_instance("maxcover", 24, 0.2, 3);
  CHECK(g_dash(inst, 3, 0.5, make_cfg(2, 24), RandomTape(2)).mr_rounds == 2);
  CHECK(g_dash(inst, 3, 0.34, make_cfg(2, 24), RandomTape(2)).mr_rounds == 3);
  RunReport one = g_dash(inst, 3, 1.0, make_cfg(2, 24), RandomTape(2));
  CHECK(one.mr_rounds == 1);
}

TEST_CASE("t_dash_opt basics") {
  SubmodularInstance inst = generate_random_instance("maxcover", 20, 0.25, 6);
  // threshold above every singleton: empty solution, guarantee void
  RunReport empty =
      t_dash_opt(inst, 2, 0.2, make_cfg(2, 20), RandomTape(3), 1e6);
  CHECK(empty.solution.size() == 0);
  CHECK(empty.mr_rounds == 2);

  auto opt = brute_force_opt(inst, 3);
  for (uint64_t seed = 0; seed < 10; ++seed) {
    RunReport rep = t_dash_opt(inst, 3, 0.2, make_cfg(1, 20),
                               RandomTape(seed), opt.opt_value);
    CHECK(rep.solution.size() <= 3);
    CHECK(rep.mr_rounds == 2);
  }
}

TEST_CASE("t_dash basics") {
  SubmodularInstance null_inst(make_modular(std::vector<double>(12, 0.0)));
  RunReport none = t_dash(null_inst, 2, 0.3, make_cfg(2, 12), RandomTape(1));
  CHECK(none.solution.size() == 0);
  CHECK(none.mr_rounds == 2);

  SubmodularInstance inst = generate_random_instance("revenuemax", 18, 0.3, 2);
  for (uint64_t seed = 0; seed < 10; ++seed) {
    RunReport rep = t_dash(inst, 1, 0.3, make_cfg(2, 18), RandomTape(seed));
    CHECK(rep.solution.size() <= 1);
    CHECK(rep.mr_rounds == 2);
  }
}

TEST_CASE("l_dist candidates and rounds") {
  SubmodularInstance inst = generate_random_instance("maxcover", 36, 0.15, 9);
  for (uint64_t seed = 0; seed < 10; ++seed) {
    RunReport rep = l_dist(inst, 3, 0.2, make_cfg(2, 36), RandomTape(seed));
    CHECK(rep.mr_rounds == 2);
    CHECK(rep.solution.size() <= 3);
    CHECK(rep.solution.value > 0.0);
  }
}

TEST_CASE("rand_greedi with one machine equals plain greedy") {
  SubmodularInstance inst = generate_random_instance("maxcover", 25, 0.2, 4);
  RunReport rep = rand_greedi(inst, 4, make_cfg(1, 25), RandomTape(5));
  OrderedSolution g = greedy(inst, 4);
  CHECK(rep.solution.value == g.value);
  CHECK(rep.mr_rounds == 2);

  RunReport again = rand_greedi(inst, 4, make_cfg(1, 25), RandomTape(5));
  CHECK(reports_equal(rep, again));
}

TEST_CASE("med with k <= k' matches the component on the same tape") {
  SubmodularInstance inst = generate_random_instance("maxcover", 24, 0.2, 7);
  ClusterConfig cfg = make_cfg(2, 24);  // k' = 11 after strictness
  RandomTape tape(9);
  RunReport wrapped = med(inst, 3, cfg, MedComponent::RandGreedi, 0.2, tape);
  RunReport vanilla = rand_greedi(inst, 3, cfg, tape.child(0));
  CHECK(wrapped.solution.items == vanilla.solution.items);
  CHECK(wrapped.solution.value == vanilla.solution.value);
  CHECK(wrapped.mr_rounds == vanilla.mr_rounds);
}

TEST_CASE("med splits large constraints into component-sized pieces") {
  SubmodularInstance inst = generate_random_instance("maxcover", 24, 0.3, 11);
  ClusterConfig cfg;
  cfg.ell = 2;
  cfg.psi = 12;
  cfg.capacity_slack = 1.5;
  // k' = 5 (strictly below psi/ell = 6); k = 10 -> m = 2 iterations
  RunReport rep = med(inst, 10, cfg, MedComponent::RandGreedi, 0.2,
                      RandomTape(13));
  CHECK(rep.mr_rounds == 4);
  CHECK(rep.solution.size() <= 10);
  CHECK(rep.solution.size() > 5);

  // beyond the component's own feasible k
  auto vanilla = check_constraint_feasibility(cfg, "rand_greedi", 10, 24);
  CHECK_FALSE(vanilla.feasible);
}

TEST_CASE("med value stays close to the component run with relaxed capacity") {
  SubmodularInstance inst = generate_random_instance("maxcover", 60, 0.1, 19);
  ClusterConfig tight;
  tight.ell = 2;
  tight.psi = 30;
  tight.capacity_slack = 1.3;
  ClusterConfig relaxed = tight;
  relaxed.psi = 60;
  int k = 20;  // above tight k' = 14, below relaxed bound 30
  double med_total = 0, vanilla_total = 0;
  const int seeds = 20;
  for (uint64_t s = 0; s < seeds; ++s) {
    med_total +=
        med(inst, k, tight, MedComponent::RandGreedi, 0.2, RandomTape(s))
            .solution.value;
    vanilla_total +=
        rand_greedi(inst, k, relaxed, RandomTape(s)).solution.value;
  }
  CHECK(med_total / seeds >= 0.95 * vanilla_total / seeds);
}

TEST_CASE("distributed runs are schedule independent") {
  SubmodularInstance inst = generate_random_instance("maxcover", 400, 0.01, 23);
  ClusterConfig serial = make_cfg(8, 400, 1.25, 1);
  ClusterConfig parallel = make_cfg(8, 400, 1.25, 8);
  for (uint64_t seed : {1u, 2u}) {
    CHECK(reports_equal(r_dash(inst, 5, 0.2, serial, RandomTape(seed)),
                        r_dash(inst, 5, 0.2, parallel, RandomTape(seed))));
    CHECK(reports_equal(l_dist(inst, 5, 0.2, serial, RandomTape(seed)),
                        l_dist(inst, 5, 0.2, parallel, RandomTape(seed))));
    CHECK(reports_equal(t_dash(inst, 5, 0.2, serial, RandomTape(seed)),
                        t_dash(inst, 5, 0.2, parallel, RandomTape(seed))));
  }
}

TEST_CASE("best-of-all-machines variant never loses value") {
  SubmodularInstance inst = generate_random_instance("revenuemax", 40, 0.2, 31);
  for (uint64_t seed = 0; seed < 6; ++seed) {
    DistOptions all;
    all.best_of_all_machines = true;
    RunReport plain = r_dash(inst, 4, 0.2, make_cfg(4, 40), RandomTape(seed));
    RunReport best =
        r_dash(inst, 4, 0.2, make_cfg(4, 40), RandomTape(seed), all);
    CHECK(best.solution.value >= plain.solution.value);
  }
}

TEST_CASE("experiment runner emits one deterministic row per run") {
  ExperimentConfig config;
  config.algorithms = {"rand_greedi", "r_dash"};
  config.objective = "maxcover";
  config.generator = "random";
  config.gen_n = 40;
  config.gen_density = 0.15;
  config.gen_seed = 3;
  config.k_list = {2, 4};
  config.eps = 0.2;
  config.ell = 2;
  config.capacity_slack = 1.3;
  config.seeds = {1, 2, 3};
  config.parallelism = 1;

  auto rows = run_experiment(config);
  REQUIRE(rows.size() == 12);
  for (const auto& row : rows) {
    CHECK(row.status == "ok");
    CHECK(row.mr_rounds == 2);
    CHECK(row.adaptive_rounds <= row.queries);
  }

  config.parallelism = 8;
  auto rows8 = run_experiment(config);
  REQUIRE(rows8.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    auto a = experiment_csv_row(rows[i]);
    auto b = experiment_csv_row(rows8[i]);
    // identical modulo the wall_ms column (position 13)
    auto strip = [](std::string s) {
      size_t last = s.rfind(',');
      size_t prev = s.rfind(',', last - 1);
      return s.substr(0, prev) + s.substr(last);
    };
    CHECK(strip(a) == strip(b));
  }

  ExperimentConfig empty_seeds = config;
  empty_seeds.seeds.clear();
  CHECK(run_experiment(empty_seeds).empty());
}

TEST_CASE("med falls back to element shipping without a summary") {
  // weighted coverage supplied as a custom objective: no summary support
  const int n = 16;
  GraphData g;
  g.n = n;
  for (int i = 1; i < n; ++i) g.edges.push_back({i - 1, i, 1.0});
  Adjacency adj = build_adjacency(g);
  auto fn = [adj](std::span<const int> s) {
    std::vector<uint8_t> covered(adj.n, 0);
    for (int v : s) {
      covered[v] = 1;
      for (int y : adj.neighbors(v)) covered[y] = 1;
    }
    long c = 0;
    for (uint8_t b : covered) c += b;
    return static_cast<double>(c);
  };
  SubmodularInstance inst(make_custom(n, fn, "custom_cover"));

  ClusterConfig cfg;
  cfg.ell = 2;
  cfg.psi = 16;  // >= 2n/ell, so the no-summary path is admissible
  cfg.capacity_slack = 1.5;
  RunReport rep = med(inst, 6, cfg, MedComponent::RandGreedi, 0.2,
                      RandomTape(21));
  CHECK(rep.solution.size() <= 6);
  CHECK(rep.mr_rounds >= 2);
  CHECK(rep.solution.value > 0.0);
  // iteration 2 onward ships the running solution to the other machine
  CHECK(rep.elements_communicated > 0);

  // without capacity headroom the fallback is rejected
  ClusterConfig tight = cfg;
  tight.psi = 9;
  CHECK_THROWS_AS(
      med(inst, 9, tight, MedComponent::RandGreedi, 0.2, RandomTape(2)),
      InfeasibleError);
}

TEST_CASE("timeouts surface as a status row") {
  ExperimentConfig config;
  config.algorithms = {"r_dash"};
  config.generator = "ba";
  config.gen_n = 20000;
  config.gen_m = 4;
  config.k_list = {50};
  config.ell = 4;
  config.capacity_slack = 1.3;
  config.seeds = {1};
  config.timeout_s = 1e-4;
  auto rows = run_experiment(config);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].status == "timeout");
}

TEST_CASE("med splits k=10 into k'-sized constraints") {
  SubmodularInstance inst = generate_random_instance("maxcover", 16, 0.3, 41);
  ClusterConfig cfg;
  cfg.ell = 2;
  cfg.psi = 9;  // k' = 4, so k=10 needs m = 3 component runs (4,4,2)
  cfg.capacity_slack = 2.0;
  RunReport rep = med(inst, 10, cfg, MedComponent::RandGreedi, 0.2,
                      RandomTape(31));
  CHECK(rep.mr_rounds == 6);
  CHECK(rep.solution.size() <= 10);
}

TEST_CASE("thread cap env variable limits parallelism") {
  setenv("DASH_SMCC_THREADS", "2", 1);
  CHECK(capped_parallelism(8) == 2);
  CHECK(capped_parallelism(1) == 1);
  unsetenv("DASH_SMCC_THREADS");
  CHECK(capped_parallelism(8) == 8);
}

TEST_CASE("t_dash at k=1 clears the singleton threshold chain") {
  SubmodularInstance inst = generate_random_instance("maxcover", 20, 0.2, 51);
  auto singles = inst.marginal_batch({}, ids(20));
  double dstar = *std::max_element(singles.begin(), singles.end());
  double eps = 0.25;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    RunReport rep = t_dash(inst, 1, eps, make_cfg(2, 20), RandomTape(seed));
    REQUIRE(rep.solution.size() == 1);
    CHECK(rep.solution.value >=
          (3.0 / 8.0) * (1.0 - eps) / (1.0 + 2.0 * eps) * dstar - 1e-9);
  }
}

TEST_CASE("csv status cells never carry commas") {
  ExperimentRow row;
  row.algo = "r_dash";
  row.objective = "maxcover";
  row.status = "error:bad, things, happened";
  std::string line = experiment_csv_row(row);
  CHECK(std::count(line.begin(), line.end(), ',') == 13);
}
