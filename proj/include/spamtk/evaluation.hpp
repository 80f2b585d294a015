#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spamtk/classifier.hpp"
#include "spamtk/dataset.hpp"
#include "spamtk/errors.hpp"
#include "spamtk/numfmt.hpp"
#include "spamtk/rng.hpp"
#include "spamtk/version.hpp"

namespace spamtk {

// Binary confusion counts with spam as the positive class.
struct ConfusionMatrix {
  std::int64_t tp = 0;  // spam classified spam
  std::int64_t fp = 0;  // ham classified spam
  std::int64_t fn = 0;  // spam classified ham
  std::int64_t tn = 0;  // ham classified ham

  std::int64_t total() const { return tp + fp + fn + tn; }

  void add(Label truth, Label predicted) {
    if (truth == Label::spam)
      (predicted == Label::spam ? tp : fn) += 1;
    else
      (predicted == Label::spam ? fp : tn) += 1;
  }

  ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }

  bool operator==(const ConfusionMatrix&) const = default;
};

// Overall metrics plus the per-class components they are built from.
// Precision and recall are support-weighted averages over both classes;
// every ratio with a zero denominator is taken as 0.
struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;  // weighted
  double recall = 0.0;     // weighted
  double precision_spam = 0.0, precision_ham = 0.0;
  double recall_spam = 0.0, recall_ham = 0.0;
};

namespace evdetail {
inline double ratio(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace evdetail

inline Metrics compute_metrics(const ConfusionMatrix& c) {
  Metrics m;
  const std::int64_t total = c.total();
  const std::int64_t support_spam = c.tp + c.fn;
  const std::int64_t support_ham = c.fp + c.tn;
  m.accuracy = evdetail::ratio(c.tp + c.tn, total);
  m.precision_spam = evdetail::ratio(c.tp, c.tp + c.fp);
  m.precision_ham = evdetail::ratio(c.tn, c.tn + c.fn);
  m.recall_spam = evdetail::ratio(c.tp, support_spam);
  m.recall_ham = evdetail::ratio(c.tn, support_ham);
  if (total > 0) {
    const double ws = static_cast<double>(support_spam) / static_cast<double>(total);
    const double wh = static_cast<double>(support_ham) / static_cast<double>(total);
    m.precision = ws * m.precision_spam + wh * m.precision_ham;
    m.recall = ws * m.recall_spam + wh * m.recall_ham;
  }
  return m;
}

// Stratified fold assignment: each class is shuffled separately (spam
// first, ham second, on one generator) and dealt round-robin, so every
// fold's class balance tracks the full dataset's.
inline std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<Label>& labels,
                                                              std::size_t k,
                                                              std::uint64_t seed) {
  if (k < 2) throw Error("fold count must be at least 2");
  std::vector<std::size_t> spam_idx, ham_idx;
  for (std::size_t i = 0; i < labels.size(); ++i)
    (labels[i] == Label::spam ? spam_idx : ham_idx).push_back(i);
  if (spam_idx.size() < k || ham_idx.size() < k)
    throw TooFewSamples("each class needs at least one sample per fold");

  Rng rng(seed);
  rng.shuffle(spam_idx);
  rng.shuffle(ham_idx);

  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t i = 0; i < spam_idx.size(); ++i) folds[i % k].push_back(spam_idx[i]);
  for (std::size_t i = 0; i < ham_idx.size(); ++i) folds[i % k].push_back(ham_idx[i]);
  return folds;
}

struct CvResult {
  ConfusionMatrix matrix;                  // summed over all folds
  Metrics metrics;                         // computed once from the sum
  std::vector<ConfusionMatrix> per_fold;
};

// Cross-validation over a fixed fold assignment. Fold f's model trains on
// every other fold; the SVM gets a per-fold seed derived from `seed` so
// folds are independent but reproducible.
inline CvResult cross_validate_folds(const Dataset& d, Algorithm algo,
                                     const std::vector<std::vector<std::size_t>>& folds,
                                     std::uint64_t seed) {
  CvResult r;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<std::size_t> train_idx;
    for (std::size_t g = 0; g < folds.size(); ++g)
      if (g != f) train_idx.insert(train_idx.end(), folds[g].begin(), folds[g].end());

    const Dataset train = select_rows(d, train_idx);
    const AnyModel model = train_model(algo, train, mix_seed(seed, f));

    ConfusionMatrix cm;
    for (std::size_t i : folds[f]) cm.add(d.labels[i], predict_label(model, d.rows[i]));
    r.per_fold.push_back(cm);
    r.matrix += cm;
  }
  r.metrics = compute_metrics(r.matrix);
  return r;
}

inline CvResult cross_validate(const Dataset& d, Algorithm algo, std::size_t k,
                               std::uint64_t seed) {
  d.check_rectangular();
  return cross_validate_folds(d, algo, stratified_folds(d.labels, k, seed), seed);
}

struct BenchmarkRow {
  std::string mask;
  Algorithm algorithm = Algorithm::naive_bayes;
  Metrics metrics;
  ConfusionMatrix matrix;
  std::size_t folds = 0;
  std::uint64_t seed = 0;
};

struct EvalReport {
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  std::vector<BenchmarkRow> rows;

  // one comment line declaring tool, protocol, and positive class, then
  // the fixed column header
  std::string csv_header_comment() const {
    return "# spamtk " + std::string(kToolkitVersion) +
           " stratified " + std::to_string(folds) + "-fold cross-validation, seed " +
           std::to_string(seed) + ", positive class spam\n";
  }

  std::string to_csv() const {
    std::string out = csv_header_comment();
    out += "mask,algorithm,accuracy,precision,recall,tp,fp,fn,tn,folds,seed\n";
    for (const BenchmarkRow& r : rows) {
      out += r.mask;
      out += ',';
      out += algorithm_name(r.algorithm);
      out += ',';
      out += format_double(r.metrics.accuracy);
      out += ',';
      out += format_double(r.metrics.precision);
      out += ',';
      out += format_double(r.metrics.recall);
      out += ',';
      out += std::to_string(r.matrix.tp) + ',' + std::to_string(r.matrix.fp) + ',' +
             std::to_string(r.matrix.fn) + ',' + std::to_string(r.matrix.tn);
      out += ',' + std::to_string(r.folds) + ',' + std::to_string(r.seed) + '\n';
    }
    return out;
  }

  std::string to_markdown() const {
    std::string out = "spamtk " + std::string(kToolkitVersion) + " — stratified " +
                      std::to_string(folds) + "-fold cross-validation, seed " +
                      std::to_string(seed) + ", positive class spam\n\n";
    out +=
        "| Features | Algorithm | Accuracy | Precision | Recall |\n"
        "|---|---|---|---|---|\n";
    for (const BenchmarkRow& r : rows) {
      out += "| " + r.mask + " | " + algorithm_name(r.algorithm) + " | " +
             format_percent(r.metrics.accuracy) + " | " + format_percent(r.metrics.precision) +
             " | " + format_percent(r.metrics.recall) + " |\n";
    }
    return out;
  }
};

// The seven non-empty category combinations, single categories first.
inline std::vector<CategoryMask> benchmark_masks() {
  return {
      CategoryMask{true, false, false}, CategoryMask{false, true, false},
      CategoryMask{false, false, true}, CategoryMask{true, true, false},
      CategoryMask{false, true, true},  CategoryMask{true, false, true},
      CategoryMask{true, true, true},
  };
}

inline std::vector<Algorithm> all_algorithms() {
  return {Algorithm::naive_bayes, Algorithm::decision_tree, Algorithm::svm};
}

// Full grid: every category combination crossed with every algorithm,
// each cell a k-fold cross-validation on the same seed.
inline EvalReport benchmark_grid(const std::vector<FeatureVector>& vectors, std::size_t k,
                                 std::uint64_t seed) {
  EvalReport report;
  report.folds = k;
  report.seed = seed;
  for (const CategoryMask& mask : benchmark_masks()) {
    const Dataset d = to_dataset(vectors, mask);
    for (Algorithm algo : all_algorithms()) {
      const CvResult cv = cross_validate(d, algo, k, seed);
      report.rows.push_back(
          BenchmarkRow{mask.name(), algo, cv.metrics, cv.matrix, k, seed});
    }
  }
  return report;
}

}  // namespace spamtk
