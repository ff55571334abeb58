#include <set>

#include "doctest.h"
#include "smcc/randomness.hpp"

using namespace smcc;

TEST_CASE("permutation is a valid bijection") {
  RandomTape tape(42);
  for (int n : {1, 2, 7, 100}) {
    Permutation sigma = tape.permutation(n, 1);
    REQUIRE(sigma.size() == n);
    std::set<int> seen(sigma.rank.begin(), sigma.rank.end());
    CHECK(static_cast<int>(seen.size()) == n);
    CHECK(*seen.begin() == 0);
    CHECK(*seen.rbegin() == n - 1);
  }
}

TEST_CASE("n=1 gives the identity permutation") {
  RandomTape tape(7);
  CHECK(tape.permutation(1, 1).rank == std::vector<int>{0});
}

TEST_CASE("same address yields identical permutations") {
  RandomTape a(123), b(123);
  CHECK(a.permutation(64, 3).rank == b.permutation(64, 3).rank);
  CHECK(a.child(5).permutation(10, 2).rank ==
        b.child(5).permutation(10, 2).rank);
  // draw order elsewhere does not disturb an address
  (void)a.permutation(64, 9);
  (void)a.child(17).draw_u64(4);
  CHECK(a.permutation(64, 3).rank == b.permutation(64, 3).rank);
}

TEST_CASE("distinct addresses give distinct streams") {
  int collisions = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    RandomTape tape(seed);
    auto subs = tape.split(4);
    for (size_t i = 0; i < subs.size(); ++i)
      for (size_t j = i + 1; j < subs.size(); ++j)
        if (subs[i].permutation(8, 1).rank == subs[j].permutation(8, 1).rank)
          ++collisions;
  }
  CHECK(collisions == 0);
}

TEST_CASE("split is deterministic and non-consuming") {
  RandomTape tape(9);
  CHECK(tape.split(0).empty());
  auto first = tape.split(3);
  (void)tape.permutation(12, 1);
  auto second = tape.split(3);
  for (int i = 0; i < 3; ++i) CHECK(first[i].key() == second[i].key());
}

TEST_CASE("rank of element 0 is uniform across draws") {
  // chi-squared over {0..4} with 4 dof; 13.2767 is the p=0.01 cutoff
  RandomTape tape(2024);
  const int draws = 10000;
  int counts[5] = {0, 0, 0, 0, 0};
  for (int j = 1; j <= draws; ++j) ++counts[tape.permutation(5, j).rank[0]];
  double expected = draws / 5.0;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 13.2767);
}

TEST_CASE("induced order basics") {
  Permutation sigma;
  sigma.rank = {2, 0, 1};  // order: 1, 2, 0
  CHECK(induced_order(sigma, std::vector<int>{}).empty());
  CHECK(induced_order(sigma, std::vector<int>{0, 1, 2}) ==
        std::vector<int>{1, 2, 0});
  CHECK(induced_order(sigma, std::vector<int>{0, 2}) ==
        std::vector<int>{2, 0});
}

TEST_CASE("induced order on a subset is a subsequence of the superset order") {
  RandomTape tape(5);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 6;
    Permutation sigma = tape.permutation(n, trial + 1);
    for (uint32_t v_mask = 0; v_mask < (1u << n); ++v_mask) {
      uint32_t b_mask = static_cast<uint32_t>(tape.draw_u64(trial) >> 7) &
                        ((1u << n) - 1);
      std::vector<int> v, vb;
      for (int i = 0; i < n; ++i) {
        if (v_mask & (1u << i)) v.push_back(i);
        if ((v_mask | b_mask) & (1u << i)) vb.push_back(i);
      }
      auto small = induced_order(sigma, v);
      auto big = induced_order(sigma, vb);
      std::vector<int> filtered;
      for (int x : big)
        if (v_mask & (1u << x)) filtered.push_back(x);
      CHECK(small == filtered);
    }
  }
}

TEST_CASE("bounded draws are unbiased enough") {
  RandomTape tape(77);
  int lo = 0;
  const int draws = 30000;
  for (int i = 0; i < draws; ++i)
    if (tape.draw_int(i, 3) == 0) ++lo;
  CHECK(lo > draws / 3 - 600);
  CHECK(lo < draws / 3 + 600);
}
