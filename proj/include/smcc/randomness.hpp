#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace smcc {

// Full-ground-set permutation stored as a rank array: rank[v] is the position
// of element v, so v precedes w iff rank[v] < rank[w].
struct Permutation {
  std::vector<int> rank;

  int size() const { return static_cast<int>(rank.size()); }
  // Elements 0..n-1 listed in permutation order.
  std::vector<int> order() const;
};

// Elements of `subset` sorted by ascending rank. The result is a subsequence
// of induced_order(sigma, subset ∪ anything), which is what consistency of the
// sampling algorithms rests on.
std::vector<int> induced_order(const Permutation& sigma,
                               std::span<const int> subset);

// Deterministic stream of permutations and uniform draws. A tape is a pure
// descriptor (seed + address path); all draws are random-access, so the same
// address always yields the same values no matter what was consumed elsewhere.
class RandomTape {
 public:
  explicit RandomTape(uint64_t seed);

  RandomTape child(uint64_t index) const;
  std::vector<RandomTape> split(int count) const;

  // j-th permutation of 0..n-1 on this sub-tape, j >= 1.
  Permutation permutation(int n, int j) const;

  uint64_t draw_u64(uint64_t index) const;
  // Unbiased uniform integer in [0, bound), bound >= 1.
  int draw_int(uint64_t index, int bound) const;
  double draw_unit(uint64_t index) const;

  uint64_t key() const { return key_; }

 private:
  RandomTape() = default;
  uint64_t key_ = 0;
};

}  // namespace smcc
