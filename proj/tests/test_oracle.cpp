#include <cmath>

#include "doctest.h"
#include "smcc/data.hpp"
#include "smcc/oracle.hpp"

using namespace smcc;

namespace {

Adjacency path3() {
  GraphData g;
  g.n = 3;
  g.edges = {{0, 1, 1.0}, {1, 2, 1.0}};
  return build_adjacency(g);
}

Adjacency star(int leaves) {
  GraphData g;
  g.n = leaves + 1;
  for (int i = 1; i <= leaves; ++i) g.edges.push_back({0, i, 1.0});
  return build_adjacency(g);
}

std::vector<int> ids(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

TEST_CASE("maxcover on a path counts covered nodes") {
  SubmodularInstance inst(make_max_cover(path3()));
  CHECK(inst.value(std::vector<int>{1}) == 3.0);
  CHECK(inst.value(std::vector<int>{0}) == 2.0);
  CHECK(inst.value(std::vector<int>{}) == 0.0);
  CHECK(inst.marginal(0, std::vector<int>{1}) == 0.0);
}

TEST_CASE("maxcover exclusive reading only counts neighbor coverage") {
  SubmodularInstance inst(make_max_cover(path3(), /*count_members=*/false));
  CHECK(inst.value(std::vector<int>{1}) == 2.0);  // nodes 0 and 2
  CHECK(inst.value(std::vector<int>{0, 2}) == 1.0);  // only node 1
}

TEST_CASE("empty set evaluates to zero for every builtin") {
  std::vector<SubmodularInstance> insts;
  insts.emplace_back(make_max_cover(star(3)));
  insts.emplace_back(make_influence_max(star(3)));
  insts.emplace_back(make_revenue_max(star(3)));
  insts.emplace_back(make_modular(std::vector<double>{1, 2, 3}));
  insts.emplace_back(generate_random_instance("imagesumm", 5, 0.0, 3));
  for (auto& inst : insts) CHECK(inst.value(std::vector<int>{}) == 0.0);
}

TEST_CASE("influence on a star matches the closed form") {
  SubmodularInstance inst(make_influence_max(star(3), 0.01));
  CHECK(inst.value(std::vector<int>{0}) ==
        doctest::Approx(1.03).epsilon(1e-12));
}

TEST_CASE("modular marginal is the weight regardless of the base") {
  SubmodularInstance inst(make_modular(std::vector<double>{0.5, 2.0, 1.0}));
  CHECK(inst.marginal(1, std::vector<int>{}) == 2.0);
  CHECK(inst.marginal(1, std::vector<int>{0, 2}) == 2.0);
  CHECK(inst.marginal(1, std::vector<int>{1}) == 0.0);
}

TEST_CASE("invalid element ids are rejected") {
  SubmodularInstance inst(make_max_cover(path3()));
  CHECK_THROWS_AS(inst.value(std::vector<int>{3}), InvalidElementError);
  CHECK_THROWS_AS(inst.marginal(-1, std::vector<int>{}), InvalidElementError);
}

TEST_CASE("ledger counts queries and adaptive rounds") {
  SubmodularInstance inst(make_max_cover(path3()));
  auto& ledger = *inst.ledger();

  std::vector<std::vector<int>> none;
  inst.value_batch(none);
  CHECK(ledger.queries.load() == 0);
  CHECK(ledger.adaptive_rounds.load() == 0);

  std::vector<std::vector<int>> one{{}};
  auto vals = inst.value_batch(one);
  CHECK(vals == std::vector<double>{0.0});
  CHECK(ledger.queries.load() == 1);
  CHECK(ledger.adaptive_rounds.load() == 1);

  std::vector<std::vector<int>> three{{0}, {1}, {2}};
  inst.value_batch(three);
  CHECK(ledger.queries.load() == 4);
  CHECK(ledger.adaptive_rounds.load() == 2);

  inst.marginal(0, std::vector<int>{1});
  CHECK(ledger.queries.load() == 5);
  CHECK(ledger.adaptive_rounds.load() == 3);
}

TEST_CASE("singleton batch on modular returns the weights") {
  std::vector<double> weights{0.25, 3.0, 1.5, 0.0};
  SubmodularInstance inst(make_modular(weights));
  std::vector<std::vector<int>> singles{{0}, {1}, {2}, {3}};
  CHECK(inst.value_batch(singles) == weights);
}

TEST_CASE("restricted instance computes marginals and shares the ledger") {
  SubmodularInstance inst(make_max_cover(path3()));
  SubmodularInstance g = inst.restrict_to_marginal(std::vector<int>{1});
  CHECK(g.value(std::vector<int>{0}) == 0.0);
  CHECK(g.value(std::vector<int>{}) == 0.0);
  CHECK(g.ledger() == inst.ledger());
  SubmodularInstance same = inst.restrict_to_marginal(std::vector<int>{});
  CHECK(same.value(std::vector<int>{1}) == 3.0);
}

TEST_CASE("summary saturates when everything is covered") {
  SubmodularInstance inst(make_max_cover(star(3)));
  auto summary = inst.summarize(std::vector<int>{0});
  for (int x = 0; x < 4; ++x)
    CHECK(eval_with_summary(*summary, std::vector<int>{x}) == 0.0);
}

TEST_CASE("custom objectives have no summary") {
  auto fn = [](std::span<const int> s) { return double(s.size()); };
  SubmodularInstance inst(make_custom(4, fn));
  CHECK_THROWS_AS(inst.summarize(std::vector<int>{}),
                  UnsupportedSummaryError);
  CHECK(inst.value(std::vector<int>{0, 2}) == 2.0);
}

TEST_CASE("summary equals direct marginals on all small subsets") {
  const int n = 8;
  for (const char* kind :
       {"maxcover", "influencemax", "revenuemax", "imagesumm", "modular"}) {
    SubmodularInstance inst = generate_random_instance(kind, n, 0.35, 11);
    for (uint32_t base_mask = 0; base_mask < (1u << n); base_mask += 5) {
      std::vector<int> base;
      for (int i = 0; i < n; ++i)
        if (base_mask & (1u << i)) base.push_back(i);
      auto summary = inst.summarize(base);
      SubmodularInstance g = inst.restrict_to_marginal(base);
      for (uint32_t x_mask = 0; x_mask < (1u << n); x_mask += 3) {
        std::vector<int> x;
        for (int i = 0; i < n; ++i)
          if ((x_mask & (1u << i)) && !(base_mask & (1u << i)))
            x.push_back(i);
        double via_summary = eval_with_summary(*summary, x);
        double direct = g.raw_value(x);
        CHECK(via_summary ==
              doctest::Approx(direct).epsilon(1e-9).scale(1.0));
      }
    }
  }
}

TEST_CASE("monotonicity and marginal batches agree on random instances") {
  for (const char* kind : {"maxcover", "influencemax", "revenuemax"}) {
    SubmodularInstance inst = generate_random_instance(kind, 10, 0.3, 5);
    std::vector<int> small{1, 4}, big{1, 4, 7, 8};
    CHECK(inst.raw_value(small) <= inst.raw_value(big) + 1e-12);
    auto batch = inst.marginal_batch(small, ids(10));
    for (int x = 0; x < 10; ++x) {
      double direct =
          inst.raw_value([&] {
            auto w = small;
            w.push_back(x);
            return w;
          }()) -
          inst.raw_value(small);
      CHECK(batch[x] == doctest::Approx(direct).epsilon(1e-9));
    }
  }
}

TEST_CASE("incremental summary add matches a fresh summary") {
  SubmodularInstance inst = generate_random_instance("revenuemax", 12, 0.4, 9);
  auto rolling = inst.summarize(std::vector<int>{});
  std::vector<int> base;
  for (int x : {3, 7, 1, 9}) {
    rolling->add(x);
    base.push_back(x);
    auto fresh = inst.summarize(base);
    for (int probe = 0; probe < 12; ++probe)
      CHECK(rolling->eval_singleton(probe) ==
            doctest::Approx(fresh->eval_singleton(probe)).epsilon(1e-9));
  }
}

TEST_CASE("monotonicity holds exhaustively on small instances") {
  for (const char* kind :
       {"maxcover", "influencemax", "revenuemax", "imagesumm"}) {
    SubmodularInstance inst = generate_random_instance(kind, 9, 0.3, 29);
    for (uint32_t mask = 0; mask < (1u << 9); ++mask) {
      std::vector<int> s;
      for (int i = 0; i < 9; ++i)
        if (mask & (1u << i)) s.push_back(i);
      double base = inst.raw_value(s);
      for (int x = 0; x < 9; ++x) {
        if (mask & (1u << x)) continue;
        s.push_back(x);
        CHECK(inst.raw_value(s) >= base - 1e-12);
        s.pop_back();
      }
    }
  }
}
