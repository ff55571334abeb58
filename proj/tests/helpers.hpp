#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "smcc/centralized.hpp"
#include "smcc/data.hpp"

namespace smcc::testing {

inline std::vector<int> ids(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

// Reference greedy: full rescan per step, ties to the smallest id. Kept
// independent of the lazy implementation it checks.
inline OrderedSolution reference_greedy(const SubmodularInstance& inst, int k,
                                        std::span<const int> universe) {
  std::vector<int> pool(universe.begin(), universe.end());
  std::sort(pool.begin(), pool.end());
  OrderedSolution sol;
  while (sol.size() < std::min<int>(k, pool.size())) {
    int best = -1;
    double best_gain = -1.0;
    double f_s = inst.raw_value(sol.items);
    for (int e : pool) {
      if (sol.contains(e)) continue;
      std::vector<int> with(sol.items);
      with.push_back(e);
      double gain = std::max(0.0, inst.raw_value(with) - f_s);
      if (gain > best_gain) {
        best_gain = gain;
        best = e;
      }
    }
    sol.items.push_back(best);
    sol.value += best_gain;
  }
  return sol;
}

struct TsmPostconditions {
  bool size_ok = true;
  bool residual_ok = true;
  bool density_ok = true;
  bool all_ok() const { return size_ok && residual_ok && density_ok; }
};

// Checks |S| <= k, the residual-marginal property on early success, and the
// per-element value density, all against raw evaluations.
inline TsmPostconditions check_tsm_postconditions(
    const SubmodularInstance& inst, std::span<const int> x,
    const ThreshSeqParams& params, const OrderedSolution& sol) {
  TsmPostconditions out;
  out.size_ok = sol.size() <= params.k;
  if (sol.status == OrderedSolution::Status::success &&
      sol.size() < params.k) {
    double f_s = inst.raw_value(sol.items);
    for (int e : x) {
      std::vector<int> with(sol.items.begin(), sol.items.end());
      with.push_back(e);
      if (inst.raw_value(with) - f_s >= params.tau) {
        out.residual_ok = false;
        break;
      }
    }
  }
  if (sol.size() > 0) {
    double f_s = inst.raw_value(sol.items);
    double needed =
        (1.0 - params.eps) * params.tau / (1.0 + 2.0 * params.eps);
    out.density_ok = f_s / sol.size() >= needed - 1e-9;
  }
  return out;
}

}  // namespace smcc::testing
