#include "smcc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace smcc {
namespace {

std::vector<int> dedup_sorted(std::span<const int> set) {
  std::vector<int> out(set.begin(), set.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// MaxCover: number of nodes covered by S. Inclusive mode counts members of S
// as covered; exclusive mode counts only nodes with a neighbor in S.

class MaxCoverSummary final : public MarginalSummary {
 public:
  MaxCoverSummary(const Adjacency* adj, bool count_members,
                  std::span<const int> base)
      : adj_(adj), count_members_(count_members), covered_(adj->n, 0) {
    for (int v : base) add(v);
  }

  double eval_singleton(int x) const override {
    long gain = 0;
    if (count_members_ && !covered_[x]) ++gain;
    for (int y : adj_->neighbors(x))
      if (!covered_[y]) ++gain;
    return static_cast<double>(gain);
  }

  double eval(std::span<const int> x) const override {
    if (x.size() == 1) return eval_singleton(x[0]);
    std::vector<int> marks;
    for (int v : x) {
      if (count_members_ && !covered_[v]) marks.push_back(v);
      for (int y : adj_->neighbors(v))
        if (!covered_[y]) marks.push_back(y);
    }
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
    return static_cast<double>(marks.size());
  }

  void add(int x) override {
    if (count_members_) covered_[x] = 1;
    for (int y : adj_->neighbors(x)) covered_[y] = 1;
  }

  std::unique_ptr<MarginalSummary> clone() const override {
    return std::make_unique<MaxCoverSummary>(*this);
  }

 private:
  const Adjacency* adj_;
  bool count_members_;
  std::vector<uint8_t> covered_;
};

class MaxCoverObjective final : public Objective {
 public:
  MaxCoverObjective(Adjacency adj, bool count_members)
      : adj_(std::move(adj)), count_members_(count_members) {}

  int n() const override { return adj_.n; }
  std::string name() const override { return "maxcover"; }

  double value(std::span<const int> set) const override {
    MaxCoverSummary s(&adj_, count_members_, {});
    return s.eval(set);
  }

  std::unique_ptr<MarginalSummary> summarize(
      std::span<const int> base) const override {
    return std::make_unique<MaxCoverSummary>(&adj_, count_members_, base);
  }

 private:
  Adjacency adj_;
  bool count_members_;
};

// ---------------------------------------------------------------------------
// InfluenceMax: f(S) = sum_i f_i(S), f_i(S) = 1 for i in S and
// 1 - (1-p)^{|N_S(i)|} otherwise.

class InfluenceSummary final : public MarginalSummary {
 public:
  InfluenceSummary(const Adjacency* adj, double p, std::span<const int> base)
      : adj_(adj), p_(p), q_(1.0 - p), member_(adj->n, 0), cnt_(adj->n, 0) {
    for (int v : base) add(v);
  }

  double eval_singleton(int x) const override {
    if (member_[x]) return 0.0;
    double gain = qpow(cnt_[x]);  // 1 - f_x(S)
    for (int y : adj_->neighbors(x))
      if (!member_[y]) gain += qpow(cnt_[y]) * p_;
    return gain;
  }

  double eval(std::span<const int> x) const override {
    if (x.size() == 1) return eval_singleton(x[0]);
    std::vector<int> fresh;
    std::unordered_set<int> fresh_set;
    for (int v : x)
      if (!member_[v] && fresh_set.insert(v).second) fresh.push_back(v);
    std::unordered_map<int, int> bump;
    for (int v : fresh)
      for (int y : adj_->neighbors(v)) ++bump[y];
    double gain = 0.0;
    for (int v : fresh) gain += qpow(cnt_[v]);
    for (auto [y, a] : bump) {
      if (member_[y] || fresh_set.count(y)) continue;
      gain += qpow(cnt_[y]) * (1.0 - qpow(a));
    }
    return gain;
  }

  void add(int x) override {
    if (member_[x]) return;
    member_[x] = 1;
    for (int y : adj_->neighbors(x)) ++cnt_[y];
  }

  std::unique_ptr<MarginalSummary> clone() const override {
    return std::make_unique<InfluenceSummary>(*this);
  }

 private:
  double qpow(int c) const { return std::pow(q_, c); }

  const Adjacency* adj_;
  double p_, q_;
  std::vector<uint8_t> member_;
  std::vector<int> cnt_;
};

class InfluenceMaxObjective final : public Objective {
 public:
  InfluenceMaxObjective(Adjacency adj, double p)
      : adj_(std::move(adj)), p_(p) {
    if (!(p > 0.0 && p < 1.0))
      throw ValidationError("influence probability must be in (0,1)");
  }

  int n() const override { return adj_.n; }
  std::string name() const override { return "influencemax"; }

  double value(std::span<const int> set) const override {
    InfluenceSummary s(&adj_, p_, {});
    return s.eval(set);
  }

  std::unique_ptr<MarginalSummary> summarize(
      std::span<const int> base) const override {
    return std::make_unique<InfluenceSummary>(&adj_, p_, base);
  }

 private:
  Adjacency adj_;
  double p_;
};

// ---------------------------------------------------------------------------
// RevenueMax: f(S) = sum_i V(sum_{j in S} w_ij), V(y) = y^alpha.

class RevenueSummary final : public MarginalSummary {
 public:
  RevenueSummary(const Adjacency* adj, double alpha, std::span<const int> base)
      : adj_(adj), alpha_(alpha), member_(adj->n, 0), wsum_(adj->n, 0.0) {
    for (int v : base) add(v);
  }

  double eval_singleton(int x) const override {
    if (member_[x]) return 0.0;
    double gain = 0.0;
    auto nbrs = adj_->neighbors(x);
    auto ws = adj_->weights_of(x);
    for (size_t i = 0; i < nbrs.size(); ++i)
      gain += vf(wsum_[nbrs[i]] + ws[i]) - vf(wsum_[nbrs[i]]);
    return std::max(0.0, gain);
  }

  double eval(std::span<const int> x) const override {
    if (x.size() == 1) return eval_singleton(x[0]);
    std::unordered_set<int> fresh;
    for (int v : x)
      if (!member_[v]) fresh.insert(v);
    std::unordered_map<int, double> bump;
    for (int v : fresh) {
      auto nbrs = adj_->neighbors(v);
      auto ws = adj_->weights_of(v);
      for (size_t i = 0; i < nbrs.size(); ++i) bump[nbrs[i]] += ws[i];
    }
    double gain = 0.0;
    for (auto [y, a] : bump) gain += vf(wsum_[y] + a) - vf(wsum_[y]);
    return std::max(0.0, gain);
  }

  void add(int x) override {
    if (member_[x]) return;
    member_[x] = 1;
    auto nbrs = adj_->neighbors(x);
    auto ws = adj_->weights_of(x);
    for (size_t i = 0; i < nbrs.size(); ++i) wsum_[nbrs[i]] += ws[i];
  }

  std::unique_ptr<MarginalSummary> clone() const override {
    return std::make_unique<RevenueSummary>(*this);
  }

 private:
  double vf(double y) const { return y > 0.0 ? std::pow(y, alpha_) : 0.0; }

  const Adjacency* adj_;
  double alpha_;
  std::vector<uint8_t> member_;
  std::vector<double> wsum_;
};

class RevenueMaxObjective final : public Objective {
 public:
  RevenueMaxObjective(Adjacency adj, double alpha)
      : adj_(std::move(adj)), alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
      throw ValidationError("revenue exponent must be in (0,1)");
    if (adj_.weights.empty())
      adj_.weights.assign(adj_.targets.size(), 1.0);
  }

  int n() const override { return adj_.n; }
  std::string name() const override { return "revenuemax"; }

  double value(std::span<const int> set) const override {
    RevenueSummary s(&adj_, alpha_, {});
    return s.eval(set);
  }

  std::unique_ptr<MarginalSummary> summarize(
      std::span<const int> base) const override {
    return std::make_unique<RevenueSummary>(&adj_, alpha_, base);
  }

 private:
  Adjacency adj_;
  double alpha_;
};

// ---------------------------------------------------------------------------
// ImageSumm: f(S) = sum_i max_{j in S} s_ij, with max over the empty set
// defined as 0. Backed by a dense matrix or implicit cosine features.

class SimilaritySource {
 public:
  virtual ~SimilaritySource() = default;
  virtual int n() const = 0;
  virtual double sim(int i, int j) const = 0;
};

class DenseSimilarity final : public SimilaritySource {
 public:
  DenseSimilarity(int n, std::vector<double> m) : n_(n), m_(std::move(m)) {}
  int n() const override { return n_; }
  double sim(int i, int j) const override { return m_[size_t(i) * n_ + j]; }

 private:
  int n_;
  std::vector<double> m_;
};

class CosineSimilarity final : public SimilaritySource {
 public:
  CosineSimilarity(int n, int d, std::vector<double> f)
      : n_(n), d_(d), f_(std::move(f)), norm_(n) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int t = 0; t < d; ++t) s += row(i)[t] * row(i)[t];
      norm_[i] = std::sqrt(s);
    }
  }
  int n() const override { return n_; }
  double sim(int i, int j) const override {
    if (i == j) return 1.0;
    if (norm_[i] == 0.0 || norm_[j] == 0.0) return 0.0;
    double dot = 0.0;
    for (int t = 0; t < d_; ++t) dot += row(i)[t] * row(j)[t];
    return std::clamp(dot / (norm_[i] * norm_[j]), 0.0, 1.0);
  }

 private:
  const double* row(int i) const { return f_.data() + size_t(i) * d_; }
  int n_, d_;
  std::vector<double> f_;
  std::vector<double> norm_;
};

class ImageSummSummary final : public MarginalSummary {
 public:
  ImageSummSummary(const SimilaritySource* src, std::span<const int> base)
      : src_(src), best_(src->n(), 0.0) {
    for (int v : base) add(v);
  }

  double eval_singleton(int x) const override {
    double gain = 0.0;
    int n = src_->n();
    for (int i = 0; i < n; ++i) {
      double s = src_->sim(i, x);
      if (s > best_[i]) gain += s - best_[i];
    }
    return gain;
  }

  double eval(std::span<const int> x) const override {
    if (x.size() == 1) return eval_singleton(x[0]);
    double gain = 0.0;
    int n = src_->n();
    for (int i = 0; i < n; ++i) {
      double m = best_[i];
      for (int j : x) m = std::max(m, src_->sim(i, j));
      gain += m - best_[i];
    }
    return gain;
  }

  void add(int x) override {
    int n = src_->n();
    for (int i = 0; i < n; ++i)
      best_[i] = std::max(best_[i], src_->sim(i, x));
  }

  std::unique_ptr<MarginalSummary> clone() const override {
    return std::make_unique<ImageSummSummary>(*this);
  }

 private:
  const SimilaritySource* src_;
  std::vector<double> best_;
};

class ImageSummObjective final : public Objective {
 public:
  explicit ImageSummObjective(std::unique_ptr<SimilaritySource> src)
      : src_(std::move(src)) {}

  int n() const override { return src_->n(); }
  std::string name() const override { return "imagesumm"; }

  double value(std::span<const int> set) const override {
    ImageSummSummary s(src_.get(), {});
    return s.eval(set);
  }

  std::unique_ptr<MarginalSummary> summarize(
      std::span<const int> base) const override {
    return std::make_unique<ImageSummSummary>(src_.get(), base);
  }

 private:
  std::unique_ptr<SimilaritySource> src_;
};

// ---------------------------------------------------------------------------

class ModularSummary final : public MarginalSummary {
 public:
  ModularSummary(const std::vector<double>* w, std::span<const int> base)
      : w_(w), member_(w->size(), 0) {
    for (int v : base) member_[v] = 1;
  }

  double eval_singleton(int x) const override {
    return member_[x] ? 0.0 : (*w_)[x];
  }
  double eval(std::span<const int> x) const override {
    double s = 0.0;
    std::unordered_set<int> seen;
    for (int v : x)
      if (!member_[v] && seen.insert(v).second) s += (*w_)[v];
    return s;
  }
  void add(int x) override { member_[x] = 1; }
  std::unique_ptr<MarginalSummary> clone() const override {
    return std::make_unique<ModularSummary>(*this);
  }

 private:
  const std::vector<double>* w_;
  std::vector<uint8_t> member_;
};

class ModularObjective final : public Objective {
 public:
  explicit ModularObjective(std::vector<double> w) : w_(std::move(w)) {
    for (double x : w_)
      if (x < 0.0) throw ValidationError("modular weights must be >= 0");
  }

  int n() const override { return static_cast<int>(w_.size()); }
  std::string name() const override { return "modular"; }

  double value(std::span<const int> set) const override {
    double s = 0.0;
    for (int v : set) s += w_[v];
    return s;
  }

  std::unique_ptr<MarginalSummary> summarize(
      std::span<const int> base) const override {
    return std::make_unique<ModularSummary>(&w_, base);
  }

 private:
  std::vector<double> w_;
};

class CustomObjective final : public Objective {
 public:
  CustomObjective(int n, std::function<double(std::span<const int>)> fn,
                  std::string name)
      : n_(n), fn_(std::move(fn)), name_(std::move(name)) {}

  int n() const override { return n_; }
  std::string name() const override { return name_; }
  bool supports_summary() const override { return false; }

  double value(std::span<const int> set) const override { return fn_(set); }

  std::unique_ptr<MarginalSummary> summarize(
      std::span<const int>) const override {
    throw UnsupportedSummaryError("objective '" + name_ +
                                  "' has no marginal summary");
  }

 private:
  int n_;
  std::function<double(std::span<const int>)> fn_;
  std::string name_;
};

}  // namespace

std::shared_ptr<const Objective> make_max_cover(Adjacency adj,
                                                bool count_members) {
  return std::make_shared<MaxCoverObjective>(std::move(adj), count_members);
}
std::shared_ptr<const Objective> make_influence_max(Adjacency adj, double p) {
  return std::make_shared<InfluenceMaxObjective>(std::move(adj), p);
}
std::shared_ptr<const Objective> make_revenue_max(Adjacency adj,
                                                  double alpha) {
  return std::make_shared<RevenueMaxObjective>(std::move(adj), alpha);
}
std::shared_ptr<const Objective> make_image_summ(int n,
                                                 std::vector<double> matrix) {
  if (matrix.size() != size_t(n) * n)
    throw ValidationError("similarity matrix must be n x n");
  return std::make_shared<ImageSummObjective>(
      std::make_unique<DenseSimilarity>(n, std::move(matrix)));
}
std::shared_ptr<const Objective> make_image_summ_features(
    int n, int d, std::vector<double> features) {
  if (features.size() != size_t(n) * d)
    throw ValidationError("feature matrix must be n x d");
  return std::make_shared<ImageSummObjective>(
      std::make_unique<CosineSimilarity>(n, d, std::move(features)));
}
std::shared_ptr<const Objective> make_modular(std::vector<double> weights) {
  return std::make_shared<ModularObjective>(std::move(weights));
}
std::shared_ptr<const Objective> make_custom(
    int n, std::function<double(std::span<const int>)> fn, std::string name) {
  return std::make_shared<CustomObjective>(n, std::move(fn), std::move(name));
}

// ---------------------------------------------------------------------------

SubmodularInstance::SubmodularInstance(
    std::shared_ptr<const Objective> objective)
    : objective_(std::move(objective)),
      ledger_(std::make_shared<QueryLedger>()) {}

SubmodularInstance SubmodularInstance::with_ledger(
    std::shared_ptr<QueryLedger> ledger) const {
  SubmodularInstance copy = *this;
  copy.ledger_ = std::move(ledger);
  return copy;
}

void SubmodularInstance::check_elements(std::span<const int> set) const {
  int bound = n();
  for (int v : set)
    if (v < 0 || v >= bound)
      throw InvalidElementError("element id " + std::to_string(v) +
                                " outside ground set of size " +
                                std::to_string(bound));
}

std::vector<int> SubmodularInstance::merge_with_base(
    std::span<const int> set) const {
  std::vector<int> merged = dedup_sorted(set);
  if (base_.empty()) return merged;
  std::vector<int> out;
  out.reserve(base_.size() + merged.size());
  std::set_union(base_.begin(), base_.end(), merged.begin(), merged.end(),
                 std::back_inserter(out));
  return out;
}

double SubmodularInstance::raw_value(std::span<const int> set) const {
  if (base_.empty()) return objective_->value(dedup_sorted(set));
  return std::max(0.0, objective_->value(merge_with_base(set)) - base_value_);
}

void SubmodularInstance::charge_batch(long queries) const {
  if (deadline_) deadline_->check();
  ledger_->charge(queries);
}

double SubmodularInstance::value(std::span<const int> set) const {
  check_elements(set);
  charge_batch(1);
  return raw_value(set);
}

double SubmodularInstance::marginal(int x, std::span<const int> set) const {
  check_elements({&x, 1});
  check_elements(set);
  charge_batch(1);
  std::vector<int> with(set.begin(), set.end());
  with.push_back(x);
  return std::max(0.0, raw_value(with) - raw_value(set));
}

std::vector<double> SubmodularInstance::value_batch(
    std::span<const std::vector<int>> sets) const {
  for (const auto& s : sets) check_elements(s);
  charge_batch(static_cast<long>(sets.size()));
  std::vector<double> out;
  out.reserve(sets.size());
  for (const auto& s : sets) out.push_back(raw_value(s));
  return out;
}

std::vector<double> SubmodularInstance::marginal_batch(
    std::span<const int> set, std::span<const int> candidates) const {
  check_elements(set);
  check_elements(candidates);
  charge_batch(static_cast<long>(candidates.size()));
  std::vector<double> out;
  out.reserve(candidates.size());
  if (objective_->supports_summary()) {
    auto summary = raw_summary(set);
    for (int x : candidates)
      out.push_back(std::max(0.0, summary->eval_singleton(x)));
  } else {
    double f0 = raw_value(set);
    std::vector<int> with(set.begin(), set.end());
    for (int x : candidates) {
      with.push_back(x);
      out.push_back(std::max(0.0, raw_value(with) - f0));
      with.pop_back();
    }
  }
  return out;
}

SubmodularInstance SubmodularInstance::restrict_to_marginal(
    std::span<const int> s) const {
  check_elements(s);
  SubmodularInstance out = *this;
  out.base_ = merge_with_base(s);
  out.base_value_ = objective_->value(out.base_);
  return out;
}

std::unique_ptr<MarginalSummary> SubmodularInstance::summarize(
    std::span<const int> s) const {
  check_elements(s);
  return objective_->summarize(merge_with_base(s));
}

std::unique_ptr<MarginalSummary> SubmodularInstance::raw_summary(
    std::span<const int> s) const {
  return objective_->summarize(merge_with_base(s));
}

double eval_with_summary(const MarginalSummary& summary,
                         std::span<const int> x) {
  return std::max(0.0, summary.eval(x));
}

}  // namespace smcc
