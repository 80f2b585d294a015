#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spamtk/classifier.hpp"
#include "spamtk/corpus_gen.hpp"
#include "spamtk/email.hpp"
#include "spamtk/errors.hpp"
#include "spamtk/features.hpp"
#include "spamtk/numfmt.hpp"
#include "spamtk/version.hpp"

namespace spamtk {

namespace iodetail {

using json = nlohmann::ordered_json;

inline std::string csv_escape(const std::string& field) {
  const bool needs = field.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

// One CSV record; handles quoted fields and "" escapes. Returns false at
// end of input.
inline bool csv_read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool quoted = false;
  bool any = false;
  int ch;
  while ((ch = in.get()) != EOF) {
    any = true;
    const char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          field += '"';
          in.get();
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get();
      break;
    } else {
      field += c;
    }
  }
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

}  // namespace iodetail

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoFailure("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoFailure("cannot write " + path.string());
  f << content;
  if (!f) throw IoFailure("short write on " + path.string());
}

// ---- feature CSV ----------------------------------------------------------

inline std::string features_csv_header() {
  std::string h = "id,label";
  for (const char* name : kFeatureNames) {
    h += ',';
    h += name;
  }
  return h;
}

inline std::string to_features_csv(const std::vector<FeatureVector>& vectors) {
  std::string out = features_csv_header() + "\n";
  for (const FeatureVector& v : vectors) {
    out += iodetail::csv_escape(v.id);
    out += ',';
    out += v.label ? label_name(*v.label) : "";
    for (double x : v.values) {
      out += ',';
      out += format_double(x);
    }
    out += '\n';
  }
  return out;
}

inline void write_features_csv(const std::filesystem::path& path,
                               const std::vector<FeatureVector>& vectors) {
  write_text_file(path, to_features_csv(vectors));
}

inline std::vector<FeatureVector> parse_features_csv(std::istream& in,
                                                     const std::string& origin) {
  std::vector<std::string> fields;
  if (!iodetail::csv_read_record(in, fields))
    throw BadFileFormat(origin + ": empty feature file");
  {
    std::istringstream want(features_csv_header());
    std::vector<std::string> expect;
    std::string col;
    while (std::getline(want, col, ',')) expect.push_back(col);
    if (fields != expect)
      throw BadFileFormat(origin + ": unexpected feature CSV header");
  }

  std::vector<FeatureVector> out;
  while (iodetail::csv_read_record(in, fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // stray blank line
    if (fields.size() != 2 + kFeatureCount)
      throw BadFileFormat(origin + ": row has " + std::to_string(fields.size()) +
                          " columns, expected " + std::to_string(2 + kFeatureCount));
    FeatureVector v;
    v.id = fields[0];
    if (!fields[1].empty()) {
      const auto lab = parse_label(fields[1]);
      if (!lab) throw BadFileFormat(origin + ": unknown label '" + fields[1] + "'");
      v.label = lab;
    }
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      try {
        std::size_t used = 0;
        v.values[j] = std::stod(fields[2 + j], &used);
        if (used != fields[2 + j].size()) throw std::invalid_argument("trailing junk");
      } catch (const std::exception&) {
        throw BadFileFormat(origin + ": bad numeric value '" + fields[2 + j] + "'");
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

inline std::vector<FeatureVector> read_features_csv(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoFailure("cannot open " + path.string());
  return parse_features_csv(f, path.string());
}

// ---- corpus manifest ------------------------------------------------------

inline std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoFailure("cannot open " + path.string());
  std::vector<std::string> fields;
  if (!iodetail::csv_read_record(f, fields) ||
      fields != std::vector<std::string>{"id", "path", "label"})
    throw BadFileFormat(path.string() + ": manifest must start with 'id,path,label'");
  std::vector<ManifestEntry> out;
  while (iodetail::csv_read_record(f, fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 3)
      throw BadFileFormat(path.string() + ": manifest row needs 3 columns");
    const auto lab = parse_label(fields[2]);
    if (!lab) throw BadFileFormat(path.string() + ": unknown label '" + fields[2] + "'");
    out.push_back(ManifestEntry{fields[0], fields[1], *lab});
  }
  return out;
}

// ---- message ingestion ----------------------------------------------------

struct LabeledMessage {
  std::string id;
  std::string source;  // where the message came from, for predict output
  std::optional<Label> label;
  EmailMessage message;
};

inline LabeledMessage read_eml_file(const std::filesystem::path& path) {
  LabeledMessage lm;
  lm.id = path.stem().string();
  lm.source = path.string();
  lm.message = parse_eml(read_text_file(path));
  return lm;
}

inline std::vector<LabeledMessage> read_mbox_file(const std::filesystem::path& path) {
  const std::vector<EmailMessage> msgs = parse_mbox(read_text_file(path));
  std::vector<LabeledMessage> out;
  out.reserve(msgs.size());
  for (std::size_t i = 0; i < msgs.size(); ++i) {
    LabeledMessage lm;
    lm.id = path.stem().string() + "#" + std::to_string(i + 1);
    lm.source = path.string() + "#" + std::to_string(i + 1);
    lm.message = msgs[i];
    out.push_back(std::move(lm));
  }
  return out;
}

namespace iodetail {

// spam/... or ham/... prefix of a manifest-relative path, if any
inline std::optional<Label> label_from_path(const std::string& rel) {
  if (rel.rfind("spam/", 0) == 0) return Label::spam;
  if (rel.rfind("ham/", 0) == 0) return Label::ham;
  return std::nullopt;
}

}  // namespace iodetail

// Resolves one manifest against its base directory. Directory structure is
// authoritative for files under spam/ or ham/; a manifest label that
// disagrees with its directory is an error, never silently overridden.
inline std::vector<LabeledMessage> read_manifest_messages(
    const std::filesystem::path& manifest_path) {
  const std::filesystem::path base = manifest_path.parent_path();
  std::vector<LabeledMessage> out;
  for (const ManifestEntry& e : read_manifest(manifest_path)) {
    const auto dir_label = iodetail::label_from_path(e.path);
    if (dir_label && *dir_label != e.label)
      throw BadFileFormat(manifest_path.string() + ": label conflict for '" + e.id +
                          "' (manifest says " + label_name(e.label) +
                          ", directory says " + label_name(*dir_label) + ")");
    LabeledMessage lm;
    lm.id = e.id;
    lm.source = (base / e.path).string();
    lm.label = e.label;
    lm.message = parse_eml(read_text_file(base / e.path));
    out.push_back(std::move(lm));
  }
  return out;
}

// Corpus directory: manifest.csv when present, otherwise a spam/ + ham/
// tree scanned in lexicographic path order. An empty tree is fine.
inline std::vector<LabeledMessage> read_corpus_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (fs::exists(dir / "manifest.csv")) return read_manifest_messages(dir / "manifest.csv");

  std::vector<std::pair<std::string, Label>> rel_paths;
  for (const Label lab : {Label::ham, Label::spam}) {
    const fs::path sub = dir / label_name(lab);
    if (!fs::is_directory(sub)) continue;
    for (const auto& entry : fs::directory_iterator(sub)) {
      if (!entry.is_regular_file()) continue;
      rel_paths.emplace_back(std::string(label_name(lab)) + "/" +
                                 entry.path().filename().string(),
                             lab);
    }
  }
  std::sort(rel_paths.begin(), rel_paths.end());

  std::vector<LabeledMessage> out;
  out.reserve(rel_paths.size());
  for (const auto& [rel, lab] : rel_paths) {
    LabeledMessage lm;
    lm.id = fs::path(rel).stem().string();
    lm.source = (dir / rel).string();
    lm.label = lab;
    lm.message = parse_eml(read_text_file(dir / rel));
    out.push_back(std::move(lm));
  }
  return out;
}

// Optional sidecar labels for .eml/.mbox inputs: a CSV of id,label rows.
inline void apply_label_file(std::vector<LabeledMessage>& messages,
                             const std::filesystem::path& labels_csv) {
  std::ifstream f(labels_csv, std::ios::binary);
  if (!f) throw IoFailure("cannot open " + labels_csv.string());
  std::vector<std::string> fields;
  if (!iodetail::csv_read_record(f, fields) ||
      fields != std::vector<std::string>{"id", "label"})
    throw BadFileFormat(labels_csv.string() + ": label file must start with 'id,label'");
  std::map<std::string, Label> by_id;
  while (iodetail::csv_read_record(f, fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 2)
      throw BadFileFormat(labels_csv.string() + ": label row needs 2 columns");
    const auto lab = parse_label(fields[1]);
    if (!lab) throw BadFileFormat(labels_csv.string() + ": unknown label '" + fields[1] + "'");
    by_id[fields[0]] = *lab;
  }
  for (LabeledMessage& lm : messages) {
    const auto it = by_id.find(lm.id);
    if (it != by_id.end()) lm.label = it->second;
  }
}

// Accepts a corpus directory (manifest.csv or a spam/ + ham/ tree), a
// manifest CSV path, a single .eml file, or an mbox file; anything
// unrecognized is treated as mbox.
inline std::vector<LabeledMessage> load_input(const std::filesystem::path& input) {
  namespace fs = std::filesystem;
  if (fs::is_directory(input)) return read_corpus_dir(input);
  if (!fs::exists(input)) throw IoFailure("no such input: " + input.string());
  const std::string ext = input.extension().string();
  if (ext == ".csv") return read_manifest_messages(input);
  if (ext == ".eml") return {read_eml_file(input)};
  return read_mbox_file(input);
}

inline std::vector<FeatureVector> extract_all(const std::vector<LabeledMessage>& messages) {
  std::vector<FeatureVector> out;
  out.reserve(messages.size());
  for (const LabeledMessage& lm : messages) {
    FeatureVector v = extract(lm.message);
    v.id = lm.id;
    v.label = lm.label;
    out.push_back(std::move(v));
  }
  return out;
}

// ---- model files ----------------------------------------------------------

namespace iodetail {

inline json to_json(const NaiveBayesModel& m) {
  json j;
  j["algorithm"] = "nb";
  j["feature_names"] = m.feature_names;
  j["prior_spam"] = m.prior_spam;
  j["prior_ham"] = m.prior_ham;
  j["mean_spam"] = m.mean_spam;
  j["var_spam"] = m.var_spam;
  j["mean_ham"] = m.mean_ham;
  j["var_ham"] = m.var_ham;
  return j;
}

inline json to_json(const DecisionTreeModel& m) {
  json j;
  j["algorithm"] = "dt";
  j["feature_names"] = m.feature_names;
  json nodes = json::array();
  for (const TreeNode& n : m.nodes) {
    json nd;
    nd["leaf"] = n.leaf;
    nd["label"] = label_name(n.label);
    nd["feature"] = n.feature;
    nd["threshold"] = n.threshold;
    nd["left"] = n.left;
    nd["right"] = n.right;
    nd["n_total"] = n.n_total;
    nd["n_spam"] = n.n_spam;
    nodes.push_back(std::move(nd));
  }
  j["nodes"] = std::move(nodes);
  return j;
}

inline json to_json(const SvmModel& m) {
  json j;
  j["algorithm"] = "svm";
  j["feature_names"] = m.feature_names;
  j["C"] = m.c;
  j["mean"] = m.mean;
  j["stddev"] = m.stddev;
  j["weights"] = m.weights;
  j["bias"] = m.bias;
  j["alphas"] = m.alphas;
  j["converged"] = m.converged;
  j["sweeps"] = m.sweeps;
  return j;
}

template <typename T>
T get_field(const json& j, const char* key, const std::string& origin) {
  const auto it = j.find(key);
  if (it == j.end()) throw BadFileFormat(origin + ": missing field '" + key + "'");
  try {
    return it->template get<T>();
  } catch (const json::exception&) {
    throw BadFileFormat(origin + ": field '" + std::string(key) + "' has the wrong type");
  }
}

}  // namespace iodetail

inline std::string model_to_json_text(const AnyModel& model,
                                      const std::string& mask_name = "all",
                                      std::uint64_t seed = 42) {
  iodetail::json j;
  j["format"] = "spamtk-model";
  j["format_version"] = 1;
  j["toolkit_version"] = kToolkitVersion;
  j["mask"] = mask_name;
  j["seed"] = seed;
  iodetail::json body = std::visit([](const auto& m) { return iodetail::to_json(m); }, model);
  for (auto& [k, v] : body.items()) j[k] = v;
  return j.dump(2) + "\n";
}

inline void save_model(const std::filesystem::path& path, const AnyModel& model,
                       const std::string& mask_name = "all", std::uint64_t seed = 42) {
  write_text_file(path, model_to_json_text(model, mask_name, seed));
}

inline AnyModel model_from_json_text(const std::string& text, const std::string& origin) {
  using iodetail::get_field;
  using iodetail::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw BadFileFormat(origin + ": not valid JSON (" + e.what() + ")");
  }
  if (get_field<std::string>(j, "format", origin) != "spamtk-model")
    throw BadFileFormat(origin + ": not a spamtk model file");
  if (get_field<int>(j, "format_version", origin) != 1)
    throw BadFileFormat(origin + ": unsupported model format version");

  const std::string algo = get_field<std::string>(j, "algorithm", origin);
  if (algo == "nb") {
    NaiveBayesModel m;
    m.feature_names = get_field<std::vector<std::string>>(j, "feature_names", origin);
    m.prior_spam = get_field<double>(j, "prior_spam", origin);
    m.prior_ham = get_field<double>(j, "prior_ham", origin);
    m.mean_spam = get_field<std::vector<double>>(j, "mean_spam", origin);
    m.var_spam = get_field<std::vector<double>>(j, "var_spam", origin);
    m.mean_ham = get_field<std::vector<double>>(j, "mean_ham", origin);
    m.var_ham = get_field<std::vector<double>>(j, "var_ham", origin);
    const std::size_t w = m.feature_names.size();
    if (m.mean_spam.size() != w || m.var_spam.size() != w || m.mean_ham.size() != w ||
        m.var_ham.size() != w)
      throw BadFileFormat(origin + ": parameter arrays disagree with feature_names");
    return m;
  }
  if (algo == "dt") {
    DecisionTreeModel m;
    m.feature_names = get_field<std::vector<std::string>>(j, "feature_names", origin);
    const auto it = j.find("nodes");
    if (it == j.end() || !it->is_array())
      throw BadFileFormat(origin + ": missing node array");
    for (const auto& nd : *it) {
      TreeNode n;
      n.leaf = get_field<bool>(nd, "leaf", origin);
      const auto lab = parse_label(get_field<std::string>(nd, "label", origin));
      if (!lab) throw BadFileFormat(origin + ": bad node label");
      n.label = *lab;
      n.feature = get_field<std::size_t>(nd, "feature", origin);
      n.threshold = get_field<double>(nd, "threshold", origin);
      n.left = get_field<int>(nd, "left", origin);
      n.right = get_field<int>(nd, "right", origin);
      n.n_total = get_field<std::size_t>(nd, "n_total", origin);
      n.n_spam = get_field<std::size_t>(nd, "n_spam", origin);
      if (!n.leaf && n.feature >= m.feature_names.size())
        throw BadFileFormat(origin + ": node feature index out of range");
      m.nodes.push_back(n);
    }
    if (m.nodes.empty()) throw BadFileFormat(origin + ": tree has no nodes");
    const int count = static_cast<int>(m.nodes.size());
    for (const TreeNode& n : m.nodes) {
      if (n.leaf) continue;
      if (n.left < 0 || n.left >= count || n.right < 0 || n.right >= count)
        throw BadFileFormat(origin + ": node child index out of range");
    }
    return m;
  }
  if (algo == "svm") {
    SvmModel m;
    m.feature_names = get_field<std::vector<std::string>>(j, "feature_names", origin);
    m.c = get_field<double>(j, "C", origin);
    if (!(m.c > 0.0)) throw BadFileFormat(origin + ": C must be positive");
    m.mean = get_field<std::vector<double>>(j, "mean", origin);
    m.stddev = get_field<std::vector<double>>(j, "stddev", origin);
    m.weights = get_field<std::vector<double>>(j, "weights", origin);
    m.bias = get_field<double>(j, "bias", origin);
    m.alphas = get_field<std::vector<double>>(j, "alphas", origin);
    m.converged = get_field<bool>(j, "converged", origin);
    m.sweeps = get_field<std::size_t>(j, "sweeps", origin);
    const std::size_t w = m.feature_names.size();
    if (m.mean.size() != w || m.stddev.size() != w || m.weights.size() != w)
      throw BadFileFormat(origin + ": parameter arrays disagree with feature_names");
    return m;
  }
  throw BadFileFormat(origin + ": unknown algorithm '" + algo + "'");
}

inline AnyModel load_model(const std::filesystem::path& path) {
  return model_from_json_text(read_text_file(path), path.string());
}

}  // namespace spamtk
