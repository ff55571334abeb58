#include "smcc/centralized.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace smcc {
namespace {

std::vector<int> dedup_sorted(std::span<const int> set) {
  std::vector<int> out(set.begin(), set.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> full_universe(const SubmodularInstance& inst) {
  std::vector<int> all(inst.n());
  for (int i = 0; i < inst.n(); ++i) all[i] = i;
  return all;
}

// Marginal gains against one growing set. Uses the objective's summary when
// available, otherwise falls back to direct evaluation. Charging is the
// caller's job.
class GainTracker {
 public:
  GainTracker(const SubmodularInstance& inst, std::span<const int> start)
      : inst_(&inst) {
    if (inst.objective().supports_summary()) {
      summary_ = inst.raw_summary(start);
    } else {
      set_.assign(start.begin(), start.end());
      value_ = start.empty() ? 0.0 : inst.raw_value(set_);
    }
  }

  double gain(int x) const {
    if (summary_) return std::max(0.0, summary_->eval_singleton(x));
    std::vector<int> with(set_);
    with.push_back(x);
    return std::max(0.0, inst_->raw_value(with) - value_);
  }

  void add(int x, double gain_of_x) {
    if (summary_) {
      summary_->add(x);
    } else {
      set_.push_back(x);
      value_ += gain_of_x;
    }
  }

 private:
  const SubmodularInstance* inst_;
  std::unique_ptr<MarginalSummary> summary_;
  std::vector<int> set_;
  double value_ = 0.0;
};

}  // namespace

bool OrderedSolution::contains(int x) const {
  return std::find(items.begin(), items.end(), x) != items.end();
}

double ThreshSeqParams::beta() const {
  return eps / (16.0 * std::log(4.0 / (1.0 - std::exp(-eps / 2.0))));
}

long ThreshSeqParams::max_iterations(int n) const {
  double m = 4.0 * (1.0 + 1.0 / (beta() * eps)) *
             std::log(static_cast<double>(n) / delta);
  return std::max<long>(1, static_cast<long>(std::ceil(m)));
}

void ThreshSeqParams::validate() const {
  if (k < 0) throw ValidationError("constraint must be >= 0");
  if (!(delta > 0.0 && delta < 1.0))
    throw ValidationError("confidence must be in (0,1)");
  if (!(eps > 0.0 && eps < 1.0))
    throw ValidationError("error parameter must be in (0,1)");
  if (!(tau >= 0.0)) throw ValidationError("threshold must be >= 0");
}

OrderedSolution greedy(const SubmodularInstance& inst, int k,
                       std::span<const int> universe) {
  OrderedSolution sol;
  if (k <= 0) return sol;
  std::vector<int> pool = universe.empty() ? full_universe(inst)
                                           : dedup_sorted(universe);
  if (pool.empty()) return sol;
  k = std::min<int>(k, static_cast<int>(pool.size()));

  GainTracker tracker(inst, {});
  // Max-heap of stale upper bounds; smaller id wins ties.
  struct Entry {
    double bound;
    int id;
    int fresh_at;  // |S| when the bound was computed
  };
  auto cmp = [](const Entry& a, const Entry& b) {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.id > b.id;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);

  inst.charge_batch(static_cast<long>(pool.size()));
  for (int e : pool) heap.push({tracker.gain(e), e, 0});

  while (sol.size() < k && !heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    if (top.fresh_at == sol.size()) {
      tracker.add(top.id, top.bound);
      sol.items.push_back(top.id);
      sol.value += top.bound;
    } else {
      inst.charge_query();
      heap.push({tracker.gain(top.id), top.id, sol.size()});
    }
  }
  return sol;
}

OrderedSolution threshold_greedy(const SubmodularInstance& inst, int k,
                                 const GuessSpec& guess, double eps,
                                 std::span<const int> universe) {
  if (k < 1) throw ValidationError("constraint must be >= 1");
  if (!(eps > 0.0 && eps < 1.0))
    throw ValidationError("error parameter must be in (0,1)");
  if (!(guess.alpha > 0.0 && guess.alpha <= 1.0))
    throw ValidationError("guess alpha must be in (0,1]");
  OrderedSolution sol;
  if (guess.gamma <= 0.0) return sol;
  std::vector<int> pool = universe.empty() ? full_universe(inst)
                                           : dedup_sorted(universe);
  GainTracker tracker(inst, {});
  double tau = guess.gamma / (guess.alpha * k);
  const double stop = eps * guess.gamma / k;
  while (tau >= stop) {
    for (int e : pool) {
      if (sol.contains(e)) continue;
      inst.charge_query();
      double m = tracker.gain(e);
      if (m >= tau) {
        tracker.add(e, m);
        sol.items.push_back(e);
        sol.value += m;
        if (sol.size() == k) return sol;
      }
    }
    tau *= (1.0 - eps);
  }
  return sol;
}

OrderedSolution thresh_seq_mod(const SubmodularInstance& inst,
                               std::span<const int> x,
                               const ThreshSeqParams& params,
                               const RandomTape& tape) {
  params.validate();
  OrderedSolution sol;
  if (params.k == 0) return sol;
  const int n = inst.n();
  if (n == 0) return sol;

  std::vector<int> v = dedup_sorted(x);
  std::vector<uint8_t> selected(n, 0);
  GainTracker tracker(inst, {});
  const long cutoff = params.max_iterations(n) + 1;
  const double theta = (1.0 - params.eps) * params.tau;

  for (long j = 1; j <= cutoff; ++j) {
    // Filter survivors against the current solution: one batch.
    inst.charge_batch(static_cast<long>(v.size()));
    std::vector<int> keep;
    keep.reserve(v.size());
    for (int e : v)
      if (!selected[e] && tracker.gain(e) >= params.tau) keep.push_back(e);
    v.swap(keep);

    if (v.empty() || sol.size() == params.k) return sol;

    Permutation sigma = tape.permutation(n, static_cast<int>(j));
    std::vector<int> seq = induced_order(sigma, v);
    const int cap = std::min<int>(params.k - sol.size(),
                                  static_cast<int>(seq.size()));

    // Sequential commit at theta, evaluated in speculative windows: gains in
    // a window are taken against the frozen committed base, so gains below
    // theta are final rejects and the first gain at or above theta is an
    // exact accept. Everything after an accept is re-batched.
    int cursor = 0;
    int accepted = 0;
    while (cursor < static_cast<int>(seq.size()) && accepted < cap) {
      int w = std::min<int>(static_cast<int>(seq.size()) - cursor,
                            std::max(64, cap));
      inst.charge_batch(w);
      int consumed = 0;
      for (; consumed < w; ++consumed) {
        int e = seq[cursor + consumed];
        double m = tracker.gain(e);
        if (m >= theta) {
          tracker.add(e, m);
          selected[e] = 1;
          sol.items.push_back(e);
          sol.value += m;
          ++accepted;
          ++consumed;
          break;
        }
      }
      cursor += consumed;
    }
  }
  sol.status = OrderedSolution::Status::failure;
  return sol;
}

OrderedSolution lag(const SubmodularInstance& inst, std::span<const int> c,
                    int k, double eps, const std::optional<GuessSpec>& guess,
                    const RandomTape& tape, LagStats* stats) {
  if (k < 1) throw ValidationError("constraint must be >= 1");
  if (!(eps > 0.0 && eps < 1.0))
    throw ValidationError("error parameter must be in (0,1)");
  OrderedSolution sol;
  std::vector<int> pool = dedup_sorted(c);
  if (pool.empty()) return sol;

  double gamma, alpha;
  if (guess) {
    gamma = guess->gamma;
    alpha = guess->alpha;
  } else {
    auto singles = inst.marginal_batch({}, pool);
    gamma = *std::max_element(singles.begin(), singles.end());
    alpha = 1.0 / k;
  }
  if (gamma <= 0.0) return sol;

  const int iterations =
      static_cast<int>(std::ceil(std::log(alpha / 3.0) /
                                 std::log(1.0 - eps))) + 1;
  const double delta = 1.0 / iterations;
  const double tau0 = gamma / (alpha * k);

  for (int i = 0; i < iterations; ++i) {
    ThreshSeqParams p;
    p.k = k - sol.size();
    p.delta = delta;
    p.eps = eps / 3.0;
    p.tau = tau0 * std::pow(1.0 - eps, i);
    SubmodularInstance g = inst.restrict_to_marginal(sol.items);
    OrderedSolution t = thresh_seq_mod(g, pool, p, tape.child(i));
    if (stats) {
      ++stats->calls;
      if (t.status == OrderedSolution::Status::failure) ++stats->failures;
    }
    for (int e : t.items) sol.items.push_back(e);
    sol.value += t.value;
    if (sol.size() == k) break;
  }
  return sol;
}

OrderedSolution ltc(const SubmodularInstance& inst, std::span<const int> x,
                    int k, const RandomTape& tape) {
  if (k < 1) throw ValidationError("constraint must be >= 1");
  std::vector<int> pool = dedup_sorted(x);
  if (pool.empty()) throw EmptyInputError("ltc needs a nonempty input set");

  Permutation sigma = tape.permutation(inst.n(), 1);
  std::vector<int> seq = induced_order(sigma, pool);

  auto singles = inst.marginal_batch({}, seq);
  double best = *std::max_element(singles.begin(), singles.end());
  int a = -1;
  for (size_t i = 0; i < seq.size(); ++i) {
    if (singles[i] == best) {
      a = seq[i];
      break;
    }
  }

  OrderedSolution sol;
  sol.items.push_back(a);
  sol.value = best;
  GainTracker tracker(inst, sol.items);
  for (int e : seq) {
    if (e == a) continue;
    inst.charge_query();
    double m = tracker.gain(e);
    if (m >= sol.value / k) {
      tracker.add(e, m);
      sol.items.push_back(e);
      sol.value += m;
    }
  }
  return sol;
}

OrderedSolution last_k(const SubmodularInstance& inst,
                       const OrderedSolution& sol, int k) {
  if (k < 0) throw ValidationError("suffix length must be >= 0");
  OrderedSolution out;
  int len = std::min<int>(k, sol.size());
  out.items.assign(sol.items.end() - len, sol.items.end());
  out.value = out.items.empty() ? 0.0 : inst.value(out.items);
  return out;
}

}  // namespace smcc
