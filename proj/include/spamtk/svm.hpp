#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "spamtk/dataset.hpp"
#include "spamtk/errors.hpp"
#include "spamtk/rng.hpp"

namespace spamtk {

// Linear soft-margin SVM trained with sequential minimal optimization.
// Features are standardized to zero mean / unit variance on the training
// rows; the decision function over a standardized point z is
//     score(z) = weights . z - bias
// with spam on the positive side. The margin width is 2 / ||weights||.
struct SvmModel {
  static constexpr double kC = 1.0;
  static constexpr double kTol = 1e-3;
  static constexpr std::size_t kMaxPasses = 10;   // consecutive all-quiet sweeps
  static constexpr std::size_t kMaxSweeps = 1000; // hard cap on total sweeps

  std::vector<std::string> feature_names;
  std::vector<double> mean;
  std::vector<double> stddev;  // population std; 0 marks a constant column
  std::vector<double> weights;
  double bias = 0.0;
  double c = kC;  // box constraint the model was trained with

  std::vector<double> alphas;  // final multipliers, training-row order
  bool converged = false;
  std::size_t sweeps = 0;

  std::size_t width() const { return feature_names.size(); }

  std::vector<double> standardize(const std::vector<double>& x) const {
    if (x.size() != width())
      throw ModelDimensionMismatch("input width does not match the trained model");
    std::vector<double> z(x.size());
    for (std::size_t j = 0; j < x.size(); ++j)
      z[j] = stddev[j] > 0.0 ? (x[j] - mean[j]) / stddev[j] : 0.0;
    return z;
  }
};

namespace svmdetail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct Smo {
  // Multipliers this close to a box bound are snapped onto it. The joint
  // update otherwise leaves ~1e-17 cancellation dust on alphas that should
  // be exactly 0 or C, and dust is unfixable later: clearing it would need
  // a pair step below the minimum step size, yet it still flips the KKT
  // check into the interior branch.
  static constexpr double kBoundSnap = 1e-12;

  const std::vector<std::vector<double>>& z;
  const std::vector<double>& y;
  const double c;
  const double tol;
  Rng& rng;

  std::vector<double> alpha;
  std::vector<double> w;
  double b = 0.0;

  Smo(const std::vector<std::vector<double>>& zz, const std::vector<double>& yy, double cc,
      double tt, Rng& r)
      : z(zz), y(yy), c(cc), tol(tt), rng(r), alpha(zz.size(), 0.0), w(zz[0].size(), 0.0) {}

  double f(std::size_t i) const { return dot(w, z[i]) + b; }
  double error(std::size_t i) const { return f(i) - y[i]; }

  bool violates_kkt(std::size_t i) const {
    const double r = error(i) * y[i];
    return (r < -tol && alpha[i] < c) || (r > tol && alpha[i] > 0.0);
  }

  bool take_step(std::size_t i, std::size_t j) {
    if (i == j) return false;
    const double ai = alpha[i], aj = alpha[j];
    const double ei = error(i), ej = error(j);
    double lo, hi;
    if (y[i] != y[j]) {
      lo = std::max(0.0, aj - ai);
      hi = std::min(c, c + aj - ai);
    } else {
      lo = std::max(0.0, ai + aj - c);
      hi = std::min(c, ai + aj);
    }
    if (lo >= hi) return false;
    const double kii = dot(z[i], z[i]);
    const double kjj = dot(z[j], z[j]);
    const double kij = dot(z[i], z[j]);
    const double eta = 2.0 * kij - kii - kjj;
    if (eta >= 0.0) return false;  // no curvature along this pair

    double aj_new = aj - y[j] * (ei - ej) / eta;
    if (aj_new < lo) aj_new = lo;
    if (aj_new > hi) aj_new = hi;
    if (aj_new < kBoundSnap) aj_new = 0.0;
    if (aj_new > c - kBoundSnap) aj_new = c;
    if (std::fabs(aj_new - aj) < 1e-7) return false;
    double ai_new = ai + y[i] * y[j] * (aj - aj_new);
    if (ai_new < kBoundSnap) ai_new = 0.0;
    if (ai_new > c - kBoundSnap) ai_new = c;

    const double b1 = b - ei - y[i] * (ai_new - ai) * kii - y[j] * (aj_new - aj) * kij;
    const double b2 = b - ej - y[i] * (ai_new - ai) * kij - y[j] * (aj_new - aj) * kjj;
    if (ai_new > 0.0 && ai_new < c)
      b = b1;
    else if (aj_new > 0.0 && aj_new < c)
      b = b2;
    else
      b = (b1 + b2) / 2.0;

    for (std::size_t k = 0; k < w.size(); ++k)
      w[k] += y[i] * (ai_new - ai) * z[i][k] + y[j] * (aj_new - aj) * z[j][k];
    alpha[i] = ai_new;
    alpha[j] = aj_new;
    return true;
  }

  // Second-choice heuristic: the partner maximizing |E_i - E_j| over
  // non-bound multipliers, then a scan of all rows from a seeded random
  // start so degenerate picks cannot stall the pass.
  bool examine(std::size_t i) {
    if (!violates_kkt(i)) return false;
    const std::size_t n = z.size();
    const double ei = error(i);

    std::size_t best_j = n;
    double best_gap = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || alpha[j] <= 0.0 || alpha[j] >= c) continue;
      const double gap = std::fabs(ei - error(j));
      if (gap > best_gap) {
        best_gap = gap;
        best_j = j;
      }
    }
    if (best_j < n && take_step(i, best_j)) return true;

    const std::size_t start = rng.below(n);
    for (std::size_t off = 0; off < n; ++off) {
      const std::size_t j = (start + off) % n;
      if (j != i && take_step(i, j)) return true;
    }
    return false;
  }

  std::size_t kkt_violation_count() const {
    std::size_t v = 0;
    for (std::size_t i = 0; i < z.size(); ++i)
      if (violates_kkt(i)) ++v;
    return v;
  }
};

}  // namespace svmdetail

inline SvmModel train_svm(const Dataset& d, std::uint64_t seed, double C = SvmModel::kC,
                          double tol = SvmModel::kTol,
                          std::size_t max_passes = SvmModel::kMaxPasses) {
  d.check_rectangular();
  if (d.size() == 0) throw EmptyDataset("cannot train on an empty dataset");
  if (d.size() < 2) throw TooFewSamples("SMO needs at least two rows");
  if (d.width() == 0) throw EmptySubset("dataset has no feature columns");
  if (C <= 0.0) throw Error("C must be positive");
  if (d.count(Label::spam) == 0 || d.count(Label::ham) == 0)
    throw SingleClass("training data must contain both spam and ham");

  const std::size_t n = d.size();
  const std::size_t w = d.width();

  SvmModel m;
  m.feature_names = d.feature_names;
  m.mean.assign(w, 0.0);
  m.stddev.assign(w, 0.0);
  for (const auto& row : d.rows)
    for (std::size_t j = 0; j < w; ++j) m.mean[j] += row[j];
  for (std::size_t j = 0; j < w; ++j) m.mean[j] /= static_cast<double>(n);
  for (const auto& row : d.rows)
    for (std::size_t j = 0; j < w; ++j) {
      const double dlt = row[j] - m.mean[j];
      m.stddev[j] += dlt * dlt;
    }
  for (std::size_t j = 0; j < w; ++j)
    m.stddev[j] = std::sqrt(m.stddev[j] / static_cast<double>(n));

  std::vector<std::vector<double>> z(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = m.standardize(d.rows[i]);
    y[i] = d.labels[i] == Label::spam ? 1.0 : -1.0;
  }

  Rng rng(seed);
  svmdetail::Smo smo(z, y, C, tol, rng);

  // A sweep where no pair steps is a fixed point: examine() tries every
  // partner for each violating row, and nothing it consults changes when
  // all steps fail. Extra quiet passes are pure confirmation.
  std::size_t quiet_passes = 0;
  std::size_t sweeps = 0;
  while (quiet_passes < max_passes && sweeps < SvmModel::kMaxSweeps) {
    std::size_t changed = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (smo.examine(i)) ++changed;
    ++sweeps;
    quiet_passes = changed == 0 ? quiet_passes + 1 : 0;
  }

  m.weights = smo.w;
  m.bias = -smo.b;
  m.c = C;
  m.alphas = smo.alpha;
  m.sweeps = sweeps;
  m.converged = smo.kkt_violation_count() == 0;
  return m;
}

// Signed decision value; positive means spam.
inline double svm_score(const SvmModel& m, const std::vector<double>& x) {
  return svmdetail::dot(m.weights, m.standardize(x)) - m.bias;
}

inline Label svm_predict(const SvmModel& m, const std::vector<double>& x) {
  return svm_score(m, x) > 0.0 ? Label::spam : Label::ham;
}

// Geometric margin width between the two supporting hyperplanes.
inline double svm_margin(const SvmModel& m) {
  const double norm = std::sqrt(svmdetail::dot(m.weights, m.weights));
  if (norm == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 / norm;
}

// Counts training rows whose KKT conditions are violated beyond `tol`:
//   alpha == 0  requires  y * score >= 1 - tol
//   0 < alpha < C  requires  |y * score - 1| <= tol
//   alpha == C  requires  y * score <= 1 + tol
inline std::size_t svm_kkt_violations(const SvmModel& m, const Dataset& d,
                                      double tol = SvmModel::kTol) {
  if (d.size() != m.alphas.size())
    throw DimensionMismatch("dataset does not match the model's training rows");
  std::size_t violations = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double y = d.labels[i] == Label::spam ? 1.0 : -1.0;
    const double margin = y * svm_score(m, d.rows[i]);
    const double a = m.alphas[i];
    bool ok;
    if (a <= 0.0)
      ok = margin >= 1.0 - tol;
    else if (a >= m.c)
      ok = margin <= 1.0 + tol;
    else
      ok = std::fabs(margin - 1.0) <= tol;
    if (!ok) ++violations;
  }
  return violations;
}

}  // namespace spamtk
