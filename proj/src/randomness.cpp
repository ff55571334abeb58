#include "smcc/randomness.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

namespace smcc {
namespace {

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

uint64_t combine(uint64_t key, uint64_t tag, uint64_t index) {
  return mix64(key ^ mix64(tag * kGolden + index + 1));
}

// Address-space tags keep permutation, child and draw streams disjoint.
constexpr uint64_t kTagChild = 0x11;
constexpr uint64_t kTagPerm = 0x22;
constexpr uint64_t kTagDraw = 0x33;

// Counter-mode generator over a fixed key.
class Stream {
 public:
  explicit Stream(uint64_t key) : key_(key) {}
  uint64_t next() { return mix64(key_ + (++counter_) * kGolden); }
  // Rejection sampling keeps bounded draws unbiased.
  uint64_t next_bounded(uint64_t bound) {
    uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace

std::vector<int> Permutation::order() const {
  std::vector<int> out(rank.size());
  for (int v = 0; v < size(); ++v) out[rank[v]] = v;
  return out;
}

std::vector<int> induced_order(const Permutation& sigma,
                               std::span<const int> subset) {
  std::vector<int> out(subset.begin(), subset.end());
  std::sort(out.begin(), out.end(),
            [&](int a, int b) { return sigma.rank[a] < sigma.rank[b]; });
  return out;
}

RandomTape::RandomTape(uint64_t seed) : key_(mix64(seed ^ kGolden)) {}

RandomTape RandomTape::child(uint64_t index) const {
  RandomTape t;
  t.key_ = combine(key_, kTagChild, index);
  return t;
}

std::vector<RandomTape> RandomTape::split(int count) const {
  std::vector<RandomTape> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(child(i));
  return out;
}

Permutation RandomTape::permutation(int n, int j) const {
  if (j < 1) throw std::invalid_argument("permutation index must be >= 1");
  Stream stream(combine(key_, kTagPerm, static_cast<uint64_t>(j)));
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    int k = static_cast<int>(stream.next_bounded(static_cast<uint64_t>(i) + 1));
    std::swap(order[i], order[k]);
  }
  Permutation sigma;
  sigma.rank.assign(n, 0);
  for (int pos = 0; pos < n; ++pos) sigma.rank[order[pos]] = pos;
  return sigma;
}

uint64_t RandomTape::draw_u64(uint64_t index) const {
  return combine(key_, kTagDraw, index);
}

int RandomTape::draw_int(uint64_t index, int bound) const {
  assert(bound >= 1);
  uint64_t b = static_cast<uint64_t>(bound);
  uint64_t threshold = (0 - b) % b;
  uint64_t r = draw_u64(index);
  uint64_t salt = 1;
  while (r < threshold) r = combine(key_, kTagDraw, index + (salt++ << 48));
  return static_cast<int>(r % b);
}

double RandomTape::draw_unit(uint64_t index) const {
  return static_cast<double>(draw_u64(index) >> 11) * 0x1.0p-53;
}

}  // namespace smcc
