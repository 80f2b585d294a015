#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "spamtk/dataset.hpp"
#include "spamtk/evaluation.hpp"
#include "spamtk/version.hpp"

namespace spamtk {

// Memoizing wrapper evaluator: a subset's score is the k-fold CV accuracy
// of `algo` on those columns. Folds are fixed once per scorer so every
// subset is judged on identical train/test partitions.
class SubsetScorer {
 public:
  SubsetScorer(const Dataset& d, Algorithm algo, std::size_t k, std::uint64_t seed)
      : data_(d), algo_(algo), k_(k), seed_(seed),
        folds_(stratified_folds(d.labels, k, seed)) {}

  double score(const std::vector<std::size_t>& subset) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      const auto it = cache_.find(subset);
      if (it != cache_.end()) return it->second;
    }
    const Dataset sub = select_features(data_, subset);
    const double acc = cross_validate_folds(sub, algo_, folds_, seed_).metrics.accuracy;
    std::lock_guard<std::mutex> lock(mu_);
    const auto [it, fresh] = cache_.emplace(subset, acc);
    if (fresh) ++evaluations_;
    return it->second;
  }

  std::size_t evaluations() const { return evaluations_; }
  std::size_t width() const { return data_.width(); }
  Algorithm algorithm() const { return algo_; }
  std::size_t folds() const { return k_; }
  std::uint64_t seed() const { return seed_; }

 private:
  const Dataset& data_;
  Algorithm algo_;
  std::size_t k_;
  std::uint64_t seed_;
  std::vector<std::vector<std::size_t>> folds_;
  std::map<std::vector<std::size_t>, double> cache_;
  std::size_t evaluations_ = 0;
  std::mutex mu_;
};

struct SelectionResult {
  Algorithm algorithm = Algorithm::naive_bayes;
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  std::size_t stale_limit = 0;

  std::vector<std::size_t> best_subset;  // 0-based column indices, ascending
  double best_score = 0.0;
  std::size_t evaluations = 0;  // distinct subsets actually cross-validated
  std::size_t expansions = 0;   // frontier nodes expanded
  // every scored subset in visit order, for reproducibility checks
  std::vector<std::pair<std::vector<std::size_t>, double>> trace;

  // "{8, 9, 13}" with 1-based feature numbers
  static std::string subset_text(const std::vector<std::size_t>& subset) {
    std::string s = "{";
    for (std::size_t i = 0; i < subset.size(); ++i) {
      if (i) s += ", ";
      s += std::to_string(subset[i] + 1);
    }
    s += "}";
    return s;
  }

  std::string summary_line() const {
    return "selected: " + subset_text(best_subset) + " score: " + format_double(best_score) +
           " evaluations: " + std::to_string(evaluations);
  }

  // every (subset, score) in visit order; subsets use 1-based numbering
  std::string trace_csv() const {
    std::string out = "# spamtk " + std::string(kToolkitVersion) + " select " +
                      algorithm_name(algorithm) + ", stratified " + std::to_string(folds) +
                      "-fold cross-validation, seed " + std::to_string(seed) +
                      ", stale limit " + std::to_string(stale_limit) + "\n";
    out += "# " + summary_line() + "\n";
    out += "subset,score\n";
    for (const auto& [subset, score] : trace)
      out += "\"" + subset_text(subset) + "\"," + format_double(score) + "\n";
    return out;
  }
};

namespace fsdetail {

struct FrontierNode {
  double score;
  std::vector<std::size_t> subset;

  // higher score first; equal scores resolved by lexicographically
  // smaller subset so the search order is fully deterministic
  bool operator<(const FrontierNode& o) const {
    if (score != o.score) return score > o.score;
    return subset < o.subset;
  }
};

}  // namespace fsdetail

// Best-first forward search. The frontier starts from the empty set;
// expanding a node scores every one-feature extension (ascending feature
// order). The search stops after `stale_limit` consecutive expansions
// that fail to improve the global best by more than kImproveEps, or when
// the frontier is exhausted.
inline constexpr double kImproveEps = 1e-6;

inline SelectionResult best_first_forward(SubsetScorer& scorer, std::size_t stale_limit = 5) {
  const std::size_t width = scorer.width();
  if (width == 0) throw EmptySubset("dataset has no feature columns");

  SelectionResult result;
  result.algorithm = scorer.algorithm();
  result.folds = scorer.folds();
  result.seed = scorer.seed();
  result.stale_limit = stale_limit;
  std::set<fsdetail::FrontierNode> frontier;
  std::set<std::vector<std::size_t>> expanded;
  frontier.insert({0.0, {}});

  std::size_t stale = 0;
  while (!frontier.empty() && stale < stale_limit) {
    const fsdetail::FrontierNode node = *frontier.begin();
    frontier.erase(frontier.begin());
    if (!expanded.insert(node.subset).second) continue;
    ++result.expansions;

    bool improved = false;
    for (std::size_t f = 0; f < width; ++f) {
      bool used = false;
      for (std::size_t s : node.subset)
        if (s == f) used = true;
      if (used) continue;

      std::vector<std::size_t> child = node.subset;
      child.insert(std::lower_bound(child.begin(), child.end(), f), f);
      if (expanded.count(child)) continue;

      const double sc = scorer.score(child);
      result.trace.emplace_back(child, sc);
      if (result.best_subset.empty() || sc > result.best_score + kImproveEps) {
        improved = true;
        result.best_score = sc;
        result.best_subset = child;
      }
      frontier.insert({sc, std::move(child)});
    }
    stale = improved ? 0 : stale + 1;
  }

  result.evaluations = scorer.evaluations();
  return result;
}

inline SelectionResult best_first_forward(const Dataset& d, Algorithm algo, std::size_t k,
                                          std::uint64_t seed, std::size_t stale_limit = 5) {
  SubsetScorer scorer(d, algo, k, seed);
  return best_first_forward(scorer, stale_limit);
}

}  // namespace spamtk
