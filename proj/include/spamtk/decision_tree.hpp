#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "spamtk/dataset.hpp"
#include "spamtk/errors.hpp"

namespace spamtk {

// Binary decision tree grown with the gain-ratio criterion. Numeric splits
// test x[feature] <= threshold (left branch); thresholds are midpoints
// between consecutive distinct values seen in the training data.
struct TreeNode {
  bool leaf = true;
  Label label = Label::ham;
  std::size_t feature = 0;
  double threshold = 0.0;
  int left = -1;   // child indices into DecisionTreeModel::nodes
  int right = -1;
  std::size_t n_total = 0;
  std::size_t n_spam = 0;
};

struct DecisionTreeModel {
  static constexpr double kMinGain = 1e-6;
  static constexpr std::size_t kMinLeaf = 2;

  std::vector<std::string> feature_names;
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  std::size_t width() const { return feature_names.size(); }
};

namespace dtdetail {

inline double entropy2(std::size_t n_spam, std::size_t n_total) {
  if (n_total == 0) return 0.0;
  double h = 0.0;
  for (std::size_t part : {n_spam, n_total - n_spam}) {
    if (part == 0) continue;
    const double p = static_cast<double>(part) / static_cast<double>(n_total);
    h -= p * std::log2(p);
  }
  return h;
}

struct SplitChoice {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain_ratio = -1.0;
};

// Evaluates every midpoint threshold of every feature over the row subset
// `idx`; keeps the best gain ratio among splits whose information gain
// clears kMinGain and whose children both hold kMinLeaf rows. Ties go to
// the lower feature index, then the lower threshold.
inline SplitChoice best_split(const Dataset& d, const std::vector<std::size_t>& idx) {
  SplitChoice best;
  const std::size_t n = idx.size();
  std::size_t spam_total = 0;
  for (std::size_t i : idx)
    if (d.labels[i] == Label::spam) ++spam_total;
  const double h_parent = entropy2(spam_total, n);

  std::vector<std::pair<double, bool>> vals(n);  // (value, is_spam) per row
  for (std::size_t j = 0; j < d.width(); ++j) {
    for (std::size_t k = 0; k < n; ++k)
      vals[k] = {d.rows[idx[k]][j], d.labels[idx[k]] == Label::spam};
    std::sort(vals.begin(), vals.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::size_t left_n = 0, left_spam = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      ++left_n;
      if (vals[k].second) ++left_spam;
      if (vals[k].first == vals[k + 1].first) continue;  // thresholds sit between distinct values
      const std::size_t right_n = n - left_n;
      if (left_n < DecisionTreeModel::kMinLeaf || right_n < DecisionTreeModel::kMinLeaf)
        continue;
      const std::size_t right_spam = spam_total - left_spam;
      const double pl = static_cast<double>(left_n) / static_cast<double>(n);
      const double pr = static_cast<double>(right_n) / static_cast<double>(n);
      const double gain =
          h_parent - pl * entropy2(left_spam, left_n) - pr * entropy2(right_spam, right_n);
      if (gain <= DecisionTreeModel::kMinGain) continue;
      const double split_info = -pl * std::log2(pl) - pr * std::log2(pr);
      if (split_info <= 0.0) continue;
      const double ratio = gain / split_info;
      const double thr = vals[k].first + (vals[k + 1].first - vals[k].first) / 2.0;
      if (ratio > best.gain_ratio + 1e-12) {
        best = {true, j, thr, ratio};
      }
    }
  }
  return best;
}

inline int grow(const Dataset& d, const std::vector<std::size_t>& idx,
                std::vector<TreeNode>& nodes) {
  TreeNode node;
  node.n_total = idx.size();
  for (std::size_t i : idx)
    if (d.labels[i] == Label::spam) ++node.n_spam;

  const std::size_t n_ham = node.n_total - node.n_spam;
  const SplitChoice split =
      (node.n_spam == 0 || n_ham == 0) ? SplitChoice{} : best_split(d, idx);

  const int self = static_cast<int>(nodes.size());
  nodes.push_back(node);
  if (!split.found) {
    // majority label; an exact tie stays ham
    nodes[self].leaf = true;
    nodes[self].label = node.n_spam > n_ham ? Label::spam : Label::ham;
    return self;
  }

  std::vector<std::size_t> left_idx, right_idx;
  for (std::size_t i : idx) {
    if (d.rows[i][split.feature] <= split.threshold)
      left_idx.push_back(i);
    else
      right_idx.push_back(i);
  }
  nodes[self].leaf = false;
  nodes[self].feature = split.feature;
  nodes[self].threshold = split.threshold;
  const int l = grow(d, left_idx, nodes);
  const int r = grow(d, right_idx, nodes);
  nodes[self].left = l;
  nodes[self].right = r;
  return self;
}

}  // namespace dtdetail

inline DecisionTreeModel train_decision_tree(const Dataset& d) {
  d.check_rectangular();
  if (d.size() == 0) throw EmptyDataset("cannot train on an empty dataset");
  if (d.width() == 0) throw EmptySubset("dataset has no feature columns");
  if (d.count(Label::spam) == 0 || d.count(Label::ham) == 0)
    throw SingleClass("training data must contain both spam and ham");

  DecisionTreeModel m;
  m.feature_names = d.feature_names;
  std::vector<std::size_t> all(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) all[i] = i;
  dtdetail::grow(d, all, m.nodes);
  return m;
}

inline const TreeNode& dt_leaf_for(const DecisionTreeModel& m, const std::vector<double>& x) {
  if (x.size() != m.width())
    throw ModelDimensionMismatch("input width does not match the trained model");
  int cur = 0;
  while (!m.nodes[cur].leaf) {
    const TreeNode& nd = m.nodes[cur];
    cur = x[nd.feature] <= nd.threshold ? nd.left : nd.right;
  }
  return m.nodes[cur];
}

inline Label dt_predict(const DecisionTreeModel& m, const std::vector<double>& x) {
  return dt_leaf_for(m, x).label;
}

// Spam fraction of the reached leaf's training rows.
inline double dt_spam_score(const DecisionTreeModel& m, const std::vector<double>& x) {
  const TreeNode& leaf = dt_leaf_for(m, x);
  if (leaf.n_total == 0) return leaf.label == Label::spam ? 1.0 : 0.0;
  return static_cast<double>(leaf.n_spam) / static_cast<double>(leaf.n_total);
}

inline std::size_t dt_depth(const DecisionTreeModel& m, int node = 0) {
  if (node < 0 || m.nodes.empty()) return 0;
  const TreeNode& nd = m.nodes[static_cast<std::size_t>(node)];
  if (nd.leaf) return 1;
  return 1 + std::max(dt_depth(m, nd.left), dt_depth(m, nd.right));
}

}  // namespace spamtk
