#pragma once

#include <optional>
#include <span>
#include <vector>

#include "smcc/oracle.hpp"
#include "smcc/randomness.hpp"

namespace smcc {

// A feasible set in insertion order with its cached objective value.
struct OrderedSolution {
  enum class Status { success, failure };

  std::vector<int> items;
  double value = 0.0;
  Status status = Status::success;

  int size() const { return static_cast<int>(items.size()); }
  bool contains(int x) const;
  bool same_as(const OrderedSolution& other) const {
    return items == other.items;
  }
};

struct ThreshSeqParams {
  int k = 0;
  double delta = 0.1;
  double eps = 0.1;
  double tau = 0.0;

  double beta() const;
  // Failure cutoff M; the outer loop runs at most M+1 iterations.
  long max_iterations(int n) const;
  void validate() const;
};

// A value gamma with gamma <= f(O) <= gamma/alpha.
struct GuessSpec {
  double gamma = 0.0;
  double alpha = 1.0;
};

struct LagStats {
  int calls = 0;
  int failures = 0;
};

// Lazy greedy over `universe` (full ground set when empty); identical output
// to plain greedy, ties broken by smallest element id.
OrderedSolution greedy(const SubmodularInstance& inst, int k,
                       std::span<const int> universe = {});

// Descending-threshold sweep; each sweep scans the universe in id order.
OrderedSolution threshold_greedy(const SubmodularInstance& inst, int k,
                                 const GuessSpec& guess, double eps,
                                 std::span<const int> universe = {});

// Low-adaptive threshold sampling: per iteration, one batched filter at tau
// followed by a batched sequential commit of the sigma_j-ordered survivors at
// (1-eps)*tau. Returns failure only past the M+1 iteration cutoff.
OrderedSolution thresh_seq_mod(const SubmodularInstance& inst,
                               std::span<const int> x,
                               const ThreshSeqParams& params,
                               const RandomTape& tape);

// Descending-threshold greedy built on thresh_seq_mod; sub-tape i drives
// iteration i so consistency is preserved across input sets.
OrderedSolution lag(const SubmodularInstance& inst, std::span<const int> c,
                    int k, double eps,
                    const std::optional<GuessSpec>& guess,
                    const RandomTape& tape, LagStats* stats = nullptr);

// Linear-time pass: seed with the first max-value singleton in permutation
// order, then add x iff its gain clears f(S)/k. Solution may exceed k
// elements; use last_k for the feasible suffix.
OrderedSolution ltc(const SubmodularInstance& inst, std::span<const int> x,
                    int k, const RandomTape& tape);

// Suffix of the insertion order, length min(k, size); value recomputed.
OrderedSolution last_k(const SubmodularInstance& inst,
                       const OrderedSolution& sol, int k);

}  // namespace smcc
