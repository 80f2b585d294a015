#pragma once

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spamtk/corpus_gen.hpp"
#include "spamtk/evaluation.hpp"
#include "spamtk/feature_selection.hpp"
#include "spamtk/io.hpp"
#include "spamtk/version.hpp"

namespace spamtk {

namespace clidetail {

inline Algorithm algo_from(const std::string& s) {
  const auto a = parse_algorithm(s);
  if (!a) throw CLI::ValidationError("--algo", "unknown algorithm '" + s + "'");
  return *a;
}

inline CategoryMask mask_from(const std::string& s) {
  const auto m = CategoryMask::parse(s);
  if (!m) throw CLI::ValidationError("--mask", "unknown category mask '" + s + "'");
  return *m;
}

// model feature names -> positions in the full 21-feature vector
inline std::vector<std::size_t> feature_positions(const std::vector<std::string>& names,
                                                  const std::string& origin) {
  std::vector<std::size_t> pos;
  for (const std::string& n : names) {
    bool found = false;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      if (n == kFeatureNames[i]) {
        pos.push_back(i);
        found = true;
        break;
      }
    }
    if (!found)
      throw ModelDimensionMismatch(origin + ": unknown feature name '" + n + "'");
  }
  return pos;
}

inline std::string metrics_block(const ConfusionMatrix& cm, const Metrics& m) {
  std::string out;
  out += "accuracy: " + format_double(m.accuracy) + "\n";
  out += "precision: " + format_double(m.precision) + "\n";
  out += "recall: " + format_double(m.recall) + "\n";
  out += "confusion: tp=" + std::to_string(cm.tp) + " fp=" + std::to_string(cm.fp) +
         " fn=" + std::to_string(cm.fn) + " tn=" + std::to_string(cm.tn) + "\n";
  return out;
}

}  // namespace clidetail

// Exit codes: 0 ok, 1 usage, 2 bad data, 3 internal error.
inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"spam classification toolkit"};
  app.set_version_flag("--version", std::string(kToolkitVersion));
  app.require_subcommand(1);

  // ---- gen-corpus ----
  auto* gen = app.add_subcommand("gen-corpus", "generate a labeled synthetic mail corpus");
  std::size_t gen_n = 1000;
  double gen_ratio = 0.5;
  std::uint64_t gen_seed = 42;
  std::string gen_out;
  gen->add_option("--n", gen_n, "number of messages")->capture_default_str();
  gen->add_option("--spam-ratio", gen_ratio, "fraction of spam messages")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "corpus seed")->capture_default_str();
  gen->add_option("--out", gen_out, "output directory")->required();

  // ---- extract ----
  auto* ext = app.add_subcommand("extract", "parse messages and write the feature table");
  std::string ext_input, ext_labels, ext_out;
  ext->add_option("--input", ext_input,
                  "corpus directory (with manifest.csv), .eml file, or mbox file")
      ->required();
  ext->add_option("--labels", ext_labels, "optional id,label CSV for unlabeled inputs");
  ext->add_option("--out", ext_out, "output feature CSV")->required();

  // ---- train ----
  auto* tr = app.add_subcommand("train", "fit a model on an extracted feature table");
  std::string tr_features, tr_algo = "nb", tr_mask = "all", tr_out;
  std::uint64_t tr_seed = 42;
  tr->add_option("--features", tr_features, "feature CSV")->required();
  tr->add_option("--algo", tr_algo, "nb | dt | svm")->capture_default_str();
  tr->add_option("--mask", tr_mask, "category mask, e.g. cat1+cat3 or all")
      ->capture_default_str();
  tr->add_option("--seed", tr_seed, "training seed (SVM partner scans)")
      ->capture_default_str();
  tr->add_option("--out", tr_out, "output model JSON")->required();

  // ---- predict ----
  auto* pr = app.add_subcommand("predict", "classify messages with a trained model");
  std::string pr_model;
  std::vector<std::string> pr_inputs;
  pr->add_option("--model", pr_model, "model JSON")->required();
  pr->add_option("--input", pr_inputs, "messages: corpus dir, .eml, or mbox (repeatable)")
      ->required();

  // ---- evaluate ----
  auto* ev = app.add_subcommand("evaluate", "stratified k-fold cross-validation");
  std::string ev_features, ev_algo = "nb", ev_mask = "all";
  std::size_t ev_folds = 10;
  std::uint64_t ev_seed = 42;
  ev->add_option("--features", ev_features, "feature CSV")->required();
  ev->add_option("--algo", ev_algo, "nb | dt | svm")->capture_default_str();
  ev->add_option("--mask", ev_mask, "category mask")->capture_default_str();
  ev->add_option("--folds", ev_folds, "fold count")->check(CLI::Range(std::size_t{2}, std::size_t{1000}))
      ->capture_default_str();
  ev->add_option("--seed", ev_seed, "shuffle seed")->capture_default_str();

  // ---- benchmark ----
  auto* bm = app.add_subcommand("benchmark",
                                "cross-validate every category combination and algorithm");
  std::string bm_features, bm_out;
  std::size_t bm_folds = 10;
  std::uint64_t bm_seed = 42;
  bm->add_option("--features", bm_features, "feature CSV")->required();
  bm->add_option("--folds", bm_folds, "fold count")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000}))
      ->capture_default_str();
  bm->add_option("--seed", bm_seed, "shuffle seed")->capture_default_str();
  bm->add_option("--out", bm_out, "output CSV path")->required();

  // ---- select ----
  auto* se = app.add_subcommand("select", "best-first forward wrapper feature selection");
  std::string se_features, se_algo = "nb", se_out;
  std::size_t se_folds = 10, se_stale = 5;
  std::uint64_t se_seed = 42;
  se->add_option("--features", se_features, "feature CSV")->required();
  se->add_option("--algo", se_algo, "nb | dt | svm")->capture_default_str();
  se->add_option("--folds", se_folds, "fold count")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000}))
      ->capture_default_str();
  se->add_option("--seed", se_seed, "shuffle seed")->capture_default_str();
  se->add_option("--stale-limit", se_stale, "non-improving expansions before stopping")
      ->capture_default_str();
  se->add_option("--out", se_out, "optional search-trace CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // help/version exit clean, usage errors exit 1
  }

  try {
    if (gen->parsed()) {
      const GenSpec spec{gen_n, gen_ratio, gen_seed};
      const auto manifest = generate_corpus(spec, gen_out);
      std::size_t spam = 0;
      for (const auto& e : manifest)
        if (e.label == Label::spam) ++spam;
      std::cout << "generated " << manifest.size() << " messages (" << spam << " spam, "
                << manifest.size() - spam << " ham) in " << gen_out << "\n";
    } else if (ext->parsed()) {
      std::vector<LabeledMessage> messages = load_input(ext_input);
      if (!ext_labels.empty()) apply_label_file(messages, ext_labels);
      for (const LabeledMessage& lm : messages)
        if (!lm.label)
          throw UnlabeledInput("no label for message '" + lm.id +
                               "' (use a labeled corpus or pass --labels)");
      const auto vectors = extract_all(messages);
      write_features_csv(ext_out, vectors);
      std::cout << "extracted " << vectors.size() << " feature vectors to " << ext_out
                << "\n";
    } else if (tr->parsed()) {
      const Algorithm algo = clidetail::algo_from(tr_algo);
      const CategoryMask mask = clidetail::mask_from(tr_mask);
      const auto vectors = read_features_csv(tr_features);
      const Dataset d = to_dataset(vectors, mask);
      const AnyModel model = train_model(algo, d, tr_seed);
      save_model(tr_out, model, mask.name(), tr_seed);
      std::cout << "trained " << algorithm_name(algo) << " on " << d.size() << " rows ("
                << mask.name() << ") -> " << tr_out << "\n";
    } else if (pr->parsed()) {
      const AnyModel model = load_model(pr_model);
      const auto positions =
          clidetail::feature_positions(model_feature_names(model), pr_model);
      for (const std::string& input : pr_inputs) {
        for (const LabeledMessage& lm : load_input(input)) {
          const FeatureVector v = extract(lm.message);
          std::vector<double> x;
          x.reserve(positions.size());
          for (std::size_t p : positions) x.push_back(v.values[p]);
          const Label lab = predict_label(model, x);
          std::cout << lm.source << '\t' << label_name(lab) << '\t'
                    << format_double(spam_score(model, x)) << "\n";
        }
      }
    } else if (ev->parsed()) {
      const Algorithm algo = clidetail::algo_from(ev_algo);
      const CategoryMask mask = clidetail::mask_from(ev_mask);
      const auto vectors = read_features_csv(ev_features);
      const Dataset d = to_dataset(vectors, mask);
      const CvResult cv = cross_validate(d, algo, ev_folds, ev_seed);
      std::cout << "mask: " << mask.name() << "\n"
                << "algorithm: " << algorithm_name(algo) << "\n"
                << "folds: " << ev_folds << "\n"
                << "seed: " << ev_seed << "\n"
                << clidetail::metrics_block(cv.matrix, cv.metrics);
    } else if (bm->parsed()) {
      const auto vectors = read_features_csv(bm_features);
      const EvalReport report = benchmark_grid(vectors, bm_folds, bm_seed);
      write_text_file(bm_out, report.to_csv());
      std::cout << report.to_markdown();
      std::cout << "wrote " << bm_out << "\n";
    } else if (se->parsed()) {
      const Algorithm algo = clidetail::algo_from(se_algo);
      const auto vectors = read_features_csv(se_features);
      const Dataset d = to_dataset(vectors, CategoryMask::all());
      const SelectionResult result =
          best_first_forward(d, algo, se_folds, se_seed, se_stale);
      std::cout << result.summary_line() << "\n";
      if (!se_out.empty()) write_text_file(se_out, result.trace_csv());
    }
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace spamtk
