#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "smcc/common.hpp"

namespace smcc {

struct GroundSet {
  int n = 0;
};

// Counts oracle traffic. A batch of m simultaneous queries costs m queries and
// exactly one adaptive round; an empty batch is a no-op.
struct QueryLedger {
  std::atomic<long> queries{0};
  std::atomic<long> adaptive_rounds{0};

  void charge(long batch_queries) {
    if (batch_queries <= 0) return;
    queries.fetch_add(batch_queries, std::memory_order_relaxed);
    adaptive_rounds.fetch_add(1, std::memory_order_relaxed);
  }
};

// Compressed per-element state for a base set S: evaluates
// f(S ∪ X) − f(S) without re-touching S. Mutable via add() so callers can
// walk a sequence incrementally. Elements already in S are ignored.
class MarginalSummary {
 public:
  virtual ~MarginalSummary() = default;
  virtual double eval(std::span<const int> x) const = 0;
  virtual double eval_singleton(int x) const = 0;
  virtual void add(int x) = 0;
  virtual std::unique_ptr<MarginalSummary> clone() const = 0;
};

class Objective {
 public:
  virtual ~Objective() = default;
  virtual int n() const = 0;
  virtual std::string name() const = 0;
  // Raw, uninstrumented evaluation. `set` holds distinct ids in any order.
  virtual double value(std::span<const int> set) const = 0;
  virtual bool supports_summary() const { return true; }
  virtual std::unique_ptr<MarginalSummary> summarize(
      std::span<const int> base) const = 0;
};

// Undirected adjacency in CSR form.
struct Adjacency {
  int n = 0;
  std::vector<int> offsets;
  std::vector<int> targets;
  std::vector<double> weights;  // empty when unweighted

  std::span<const int> neighbors(int v) const {
    return {targets.data() + offsets[v],
            targets.data() + offsets[v + 1]};
  }
  std::span<const double> weights_of(int v) const {
    return {weights.data() + offsets[v],
            weights.data() + offsets[v + 1]};
  }
};

std::shared_ptr<const Objective> make_max_cover(Adjacency adj,
                                                bool count_members = true);
std::shared_ptr<const Objective> make_influence_max(Adjacency adj,
                                                    double p = 0.01);
std::shared_ptr<const Objective> make_revenue_max(Adjacency adj,
                                                  double alpha = 0.3);
// Dense similarity matrix (row-major n x n), entries in [0, 1].
std::shared_ptr<const Objective> make_image_summ(int n,
                                                 std::vector<double> matrix);
// Implicit similarity: cosine between non-negative feature rows (n x d).
std::shared_ptr<const Objective> make_image_summ_features(
    int n, int d, std::vector<double> features);
std::shared_ptr<const Objective> make_modular(std::vector<double> weights);
std::shared_ptr<const Objective> make_custom(
    int n, std::function<double(std::span<const int>)> fn,
    std::string name = "custom");

// An objective plus instrumentation plus an optional base set: a restricted
// instance evaluates g(X) = f(base ∪ X) − f(base) against the parent ledger.
class SubmodularInstance {
 public:
  SubmodularInstance() = default;
  explicit SubmodularInstance(std::shared_ptr<const Objective> objective);

  int n() const { return objective_->n(); }
  GroundSet ground() const { return {n()}; }
  const Objective& objective() const { return *objective_; }
  const std::shared_ptr<QueryLedger>& ledger() const { return ledger_; }
  std::span<const int> base() const { return base_; }
  double base_value() const { return base_value_; }

  void set_deadline(const Deadline* d) { deadline_ = d; }
  const Deadline* deadline() const { return deadline_; }

  // A view sharing the objective and base but writing counters to `ledger`;
  // used to give each simulated machine its own adaptivity strand.
  SubmodularInstance with_ledger(std::shared_ptr<QueryLedger> ledger) const;

  // One query, one adaptive round.
  double value(std::span<const int> set) const;
  // One query, one adaptive round; non-negative.
  double marginal(int x, std::span<const int> set) const;
  // |sets| queries, one adaptive round (empty list is free).
  std::vector<double> value_batch(
      std::span<const std::vector<int>> sets) const;
  // Marginals of each candidate against `set`; |candidates| queries, one
  // round. Uses the objective's summary internally when available.
  std::vector<double> marginal_batch(std::span<const int> set,
                                     std::span<const int> candidates) const;

  SubmodularInstance restrict_to_marginal(std::span<const int> s) const;
  // Summary of base ∪ s; throws UnsupportedSummaryError for objectives
  // without one.
  std::unique_ptr<MarginalSummary> summarize(std::span<const int> s) const;

  // Uncounted internals for algorithms that batch their own query groups.
  std::unique_ptr<MarginalSummary> raw_summary(std::span<const int> s) const;
  double raw_value(std::span<const int> set) const;
  void charge_batch(long queries) const;
  void charge_query() const { charge_batch(1); }

 private:
  void check_elements(std::span<const int> set) const;
  std::vector<int> merge_with_base(std::span<const int> set) const;

  std::shared_ptr<const Objective> objective_;
  std::shared_ptr<QueryLedger> ledger_;
  std::vector<int> base_;  // sorted
  double base_value_ = 0.0;
  const Deadline* deadline_ = nullptr;
};

double eval_with_summary(const MarginalSummary& summary,
                         std::span<const int> x);

}  // namespace smcc
