#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spamtk/errors.hpp"
#include "spamtk/features.hpp"

namespace spamtk {

// Dense numeric table: one row per message, one column per feature.
// rows/labels/ids are parallel arrays.
struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;
  std::vector<std::string> ids;

  std::size_t size() const { return rows.size(); }
  std::size_t width() const { return feature_names.size(); }

  std::size_t count(Label l) const {
    std::size_t n = 0;
    for (Label x : labels)
      if (x == l) ++n;
    return n;
  }

  void check_rectangular() const {
    if (rows.size() != labels.size() || rows.size() != ids.size())
      throw DimensionMismatch("rows, labels and ids must be parallel");
    for (const auto& r : rows)
      if (r.size() != feature_names.size())
        throw DimensionMismatch("row width does not match feature_names");
  }
};

// Builds a dataset from labeled feature vectors restricted to `mask`.
// Vectors without a label are rejected: training and evaluation need
// ground truth for every row.
inline Dataset to_dataset(const std::vector<FeatureVector>& vectors,
                          const CategoryMask& mask) {
  Dataset d;
  d.feature_names = projected_feature_names(mask);
  d.rows.reserve(vectors.size());
  d.labels.reserve(vectors.size());
  d.ids.reserve(vectors.size());
  for (const FeatureVector& v : vectors) {
    if (!v.label) throw UnlabeledInput("feature vector '" + v.id + "' has no label");
    d.rows.push_back(project(v, mask));
    d.labels.push_back(*v.label);
    d.ids.push_back(v.id);
  }
  return d;
}

// Column subset by 0-based indices (used by the wrapper search).
inline Dataset select_features(const Dataset& d, const std::vector<std::size_t>& cols) {
  if (cols.empty()) throw EmptySubset("feature subset is empty");
  Dataset out;
  for (std::size_t c : cols) {
    if (c >= d.width()) throw DimensionMismatch("feature index out of range");
    out.feature_names.push_back(d.feature_names[c]);
  }
  out.rows.reserve(d.size());
  for (const auto& r : d.rows) {
    std::vector<double> row;
    row.reserve(cols.size());
    for (std::size_t c : cols) row.push_back(r[c]);
    out.rows.push_back(std::move(row));
  }
  out.labels = d.labels;
  out.ids = d.ids;
  return out;
}

// Row subset (used by cross-validation fold assembly).
inline Dataset select_rows(const Dataset& d, const std::vector<std::size_t>& idx) {
  Dataset out;
  out.feature_names = d.feature_names;
  out.rows.reserve(idx.size());
  out.labels.reserve(idx.size());
  out.ids.reserve(idx.size());
  for (std::size_t i : idx) {
    if (i >= d.size()) throw DimensionMismatch("row index out of range");
    out.rows.push_back(d.rows[i]);
    out.labels.push_back(d.labels[i]);
    out.ids.push_back(d.ids[i]);
  }
  return out;
}

}  // namespace spamtk
