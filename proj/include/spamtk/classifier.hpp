#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "spamtk/dataset.hpp"
#include "spamtk/decision_tree.hpp"
#include "spamtk/naive_bayes.hpp"
#include "spamtk/svm.hpp"

namespace spamtk {

enum class Algorithm { naive_bayes, decision_tree, svm };

inline const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::naive_bayes: return "nb";
    case Algorithm::decision_tree: return "dt";
    case Algorithm::svm: return "svm";
  }
  return "nb";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view s) {
  if (s == "nb" || s == "naive-bayes" || s == "naive_bayes") return Algorithm::naive_bayes;
  if (s == "dt" || s == "decision-tree" || s == "decision_tree" || s == "tree")
    return Algorithm::decision_tree;
  if (s == "svm") return Algorithm::svm;
  return std::nullopt;
}

using AnyModel = std::variant<NaiveBayesModel, DecisionTreeModel, SvmModel>;

inline Algorithm model_algorithm(const AnyModel& m) {
  if (std::holds_alternative<NaiveBayesModel>(m)) return Algorithm::naive_bayes;
  if (std::holds_alternative<DecisionTreeModel>(m)) return Algorithm::decision_tree;
  return Algorithm::svm;
}

// The SVM consumes the seed for its partner scans; the other two are
// deterministic and ignore it.
inline AnyModel train_model(Algorithm algo, const Dataset& d, std::uint64_t seed) {
  switch (algo) {
    case Algorithm::naive_bayes: return train_naive_bayes(d);
    case Algorithm::decision_tree: return train_decision_tree(d);
    case Algorithm::svm: return train_svm(d, seed);
  }
  throw Error("unknown algorithm");
}

inline Label predict_label(const AnyModel& m, const std::vector<double>& x) {
  return std::visit(
      [&](const auto& model) -> Label {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, NaiveBayesModel>) return nb_predict(model, x);
        else if constexpr (std::is_same_v<T, DecisionTreeModel>) return dt_predict(model, x);
        else return svm_predict(model, x);
      },
      m);
}

// Algorithm-specific confidence: NB gives a posterior, the tree a leaf
// spam fraction (both in [0,1]), the SVM its signed decision value.
inline double spam_score(const AnyModel& m, const std::vector<double>& x) {
  return std::visit(
      [&](const auto& model) -> double {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, NaiveBayesModel>) return nb_spam_posterior(model, x);
        else if constexpr (std::is_same_v<T, DecisionTreeModel>) return dt_spam_score(model, x);
        else return svm_score(model, x);
      },
      m);
}

inline const std::vector<std::string>& model_feature_names(const AnyModel& m) {
  return std::visit(
      [](const auto& model) -> const std::vector<std::string>& { return model.feature_names; },
      m);
}

}  // namespace spamtk
