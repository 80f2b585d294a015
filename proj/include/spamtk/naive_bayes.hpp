#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "spamtk/dataset.hpp"
#include "spamtk/errors.hpp"

namespace spamtk {

// Gaussian naive Bayes: per class, each feature is modeled with an
// independent normal density; prediction maximizes
//   log P(c) + sum_j log N(x_j | mu_cj, var_cj).
// Variances are floored so constant features cannot produce infinities.
struct NaiveBayesModel {
  static constexpr double kVarianceFloor = 1e-9;

  std::vector<std::string> feature_names;
  double prior_spam = 0.5;
  double prior_ham = 0.5;
  std::vector<double> mean_spam, var_spam;
  std::vector<double> mean_ham, var_ham;

  std::size_t width() const { return feature_names.size(); }
};

namespace nbdetail {

inline void fit_class(const Dataset& d, Label which, std::vector<double>& mean,
                      std::vector<double>& var) {
  const std::size_t w = d.width();
  mean.assign(w, 0.0);
  var.assign(w, 0.0);
  std::size_t n = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.labels[i] != which) continue;
    ++n;
    for (std::size_t j = 0; j < w; ++j) mean[j] += d.rows[i][j];
  }
  for (std::size_t j = 0; j < w; ++j) mean[j] /= static_cast<double>(n);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.labels[i] != which) continue;
    for (std::size_t j = 0; j < w; ++j) {
      const double dlt = d.rows[i][j] - mean[j];
      var[j] += dlt * dlt;
    }
  }
  for (std::size_t j = 0; j < w; ++j) {
    var[j] /= static_cast<double>(n);
    if (var[j] < NaiveBayesModel::kVarianceFloor) var[j] = NaiveBayesModel::kVarianceFloor;
  }
}

inline double log_gaussian(double x, double mean, double var) {
  static const double kLog2Pi = std::log(2.0 * std::acos(-1.0));
  const double d = x - mean;
  return -0.5 * (kLog2Pi + std::log(var) + d * d / var);
}

}  // namespace nbdetail

inline NaiveBayesModel train_naive_bayes(const Dataset& d) {
  d.check_rectangular();
  if (d.size() == 0) throw EmptyDataset("cannot train on an empty dataset");
  if (d.width() == 0) throw EmptySubset("dataset has no feature columns");
  const std::size_t n_spam = d.count(Label::spam);
  const std::size_t n_ham = d.size() - n_spam;
  if (n_spam == 0 || n_ham == 0)
    throw SingleClass("training data must contain both spam and ham");

  NaiveBayesModel m;
  m.feature_names = d.feature_names;
  m.prior_spam = static_cast<double>(n_spam) / static_cast<double>(d.size());
  m.prior_ham = static_cast<double>(n_ham) / static_cast<double>(d.size());
  nbdetail::fit_class(d, Label::spam, m.mean_spam, m.var_spam);
  nbdetail::fit_class(d, Label::ham, m.mean_ham, m.var_ham);
  return m;
}

// Log joint densities for both classes; everything downstream derives
// from this pair.
inline std::pair<double, double> nb_log_joint(const NaiveBayesModel& m,
                                              const std::vector<double>& x) {
  if (x.size() != m.width())
    throw ModelDimensionMismatch("input width does not match the trained model");
  double ls = std::log(m.prior_spam);
  double lh = std::log(m.prior_ham);
  for (std::size_t j = 0; j < x.size(); ++j) {
    ls += nbdetail::log_gaussian(x[j], m.mean_spam[j], m.var_spam[j]);
    lh += nbdetail::log_gaussian(x[j], m.mean_ham[j], m.var_ham[j]);
  }
  return {ls, lh};
}

// Posterior P(spam | x) via the log-sum-exp trick.
inline double nb_spam_posterior(const NaiveBayesModel& m, const std::vector<double>& x) {
  const auto [ls, lh] = nb_log_joint(m, x);
  const double mx = ls > lh ? ls : lh;
  const double zs = std::exp(ls - mx);
  const double zh = std::exp(lh - mx);
  return zs / (zs + zh);
}

// Ties break toward ham: flagging legitimate mail is the costlier error.
inline Label nb_predict(const NaiveBayesModel& m, const std::vector<double>& x) {
  const auto [ls, lh] = nb_log_joint(m, x);
  return ls > lh ? Label::spam : Label::ham;
}

}  // namespace spamtk
