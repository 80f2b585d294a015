#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spamtk/email.hpp"
#include "spamtk/errors.hpp"
#include "spamtk/tokenizer.hpp"

namespace spamtk {

enum class Label { ham = 0, spam = 1 };

inline const char* label_name(Label l) { return l == Label::spam ? "spam" : "ham"; }

inline std::optional<Label> parse_label(std::string_view s) {
  if (s == "spam") return Label::spam;
  if (s == "ham") return Label::ham;
  return std::nullopt;
}

inline constexpr std::size_t kFeatureCount = 21;

// Column names, index order f1..f21. These are the canonical names used by
// the feature CSV header and the feature dictionary document.
inline constexpr std::array<const char*, kFeatureCount> kFeatureNames = {
    "f1_subj_repeated_chars",     // binary: some char repeats >=3x in a row
    "f2_subj_allcaps_words",      // count: tokens len>=2, letters all uppercase
    "f3_subj_long_words",         // count: tokens with >=15 characters
    "f4_subj_rare_letter_words",  // count: tokens with >=2 of J,K,Q,X,Z
    "f5_subj_novowel_words",      // count: alphabetic words len>=2, no vowel
    "f6_subj_embedded_specials",  // count: tokens with a non-letter before a letter
    "f7_priority_nonnormal",      // binary: priority header outside the normal set
    "f8_content_type_html",       // binary: text/html declared anywhere
    "f9_body_novowel7_prop",      // proportion: alpha words, no vowel, len>=7
    "f10_body_rare_letter_prop",  // proportion: alpha words with >=2 of J,K,Q,X,Z
    "f11_body_long_word_prop",    // proportion: alpha words len>=15
    "f12_body_from_to_literals",  // binary: both "From:" and "To:" in body
    "f13_body_comment_tags",      // count: "<!--" occurrences
    "f14_body_hyperlinks",        // count: "href=" occurrences (case-insensitive)
    "f15_body_clickable_images",  // count: <img> lexically inside <a>...</a>
    "f16_body_white_text",        // binary: any color declaration set to white
    "f17_body_noisy_urls",        // count: href values with a digit or &, %, @
    "f18_body_color_elements",    // count: CSS + HTML color declarations
    "f19_body_javascript",        // binary: <script>, on*=... attribute, or javascript: URL
    "f20_body_css",               // binary: <style>, style= attribute, or stylesheet link
    "f21_body_table_tag",         // binary: "<table" present
};

// Range classes used for invariant checks: binary features are in {0,1},
// count features are non-negative integers, proportions are in [0,1].
enum class FeatureKind { binary, count, proportion };

inline constexpr std::array<FeatureKind, kFeatureCount> kFeatureKinds = {
    FeatureKind::binary,     FeatureKind::count,      FeatureKind::count,
    FeatureKind::count,      FeatureKind::count,      FeatureKind::count,
    FeatureKind::binary,     FeatureKind::binary,     FeatureKind::proportion,
    FeatureKind::proportion, FeatureKind::proportion, FeatureKind::binary,
    FeatureKind::count,      FeatureKind::count,      FeatureKind::count,
    FeatureKind::binary,     FeatureKind::count,      FeatureKind::count,
    FeatureKind::binary,     FeatureKind::binary,     FeatureKind::binary,
};

struct FeatureVector {
  std::array<double, kFeatureCount> values{};
  std::optional<Label> label;
  std::string id;
};

// Restriction of the 21 features to their source categories:
// cat1 = subject (f1-f6), cat2 = priority/content-type headers (f7-f8),
// cat3 = body (f9-f21).
struct CategoryMask {
  bool cat1 = false;
  bool cat2 = false;
  bool cat3 = false;

  static CategoryMask all() { return {true, true, true}; }
  bool any() const { return cat1 || cat2 || cat3; }

  // 0-based column indices covered by the mask, ascending.
  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> idx;
    if (cat1)
      for (std::size_t i = 0; i < 6; ++i) idx.push_back(i);
    if (cat2)
      for (std::size_t i = 6; i < 8; ++i) idx.push_back(i);
    if (cat3)
      for (std::size_t i = 8; i < kFeatureCount; ++i) idx.push_back(i);
    return idx;
  }

  std::string name() const {
    std::string s;
    if (cat1) s += "cat1";
    if (cat2) s += s.empty() ? "cat2" : "+cat2";
    if (cat3) s += s.empty() ? "cat3" : "+cat3";
    return s.empty() ? "none" : s;
  }

  // Accepts forms like "cat1+cat3", "cat2,cat3", "all" (case-insensitive).
  static std::optional<CategoryMask> parse(std::string_view s) {
    CategoryMask m;
    std::string low = detail::ascii_lower(s);
    if (low == "all" || low == "full") return all();
    std::size_t pos = 0;
    while (pos < low.size()) {
      std::size_t end = low.find_first_of("+,", pos);
      if (end == std::string::npos) end = low.size();
      const std::string_view item = detail::trim(std::string_view(low).substr(pos, end - pos));
      if (item == "cat1" || item == "1") m.cat1 = true;
      else if (item == "cat2" || item == "2") m.cat2 = true;
      else if (item == "cat3" || item == "3") m.cat3 = true;
      else if (!item.empty()) return std::nullopt;
      pos = end + 1;
    }
    if (!m.any()) return std::nullopt;
    return m;
  }

  bool operator==(const CategoryMask&) const = default;
};

namespace fdetail {

using detail::is_ascii_letter;
using detail::is_space_char;

inline bool is_vowel(char c) {
  if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

inline bool is_rare_letter(char c) {
  if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  return c == 'J' || c == 'K' || c == 'Q' || c == 'X' || c == 'Z';
}

inline std::size_t rare_letter_count(std::string_view tok) {
  std::size_t n = 0;
  for (char c : tok)
    if (is_rare_letter(c)) ++n;
  return n;
}

inline bool has_vowel(std::string_view w) {
  for (char c : w)
    if (is_vowel(c)) return true;
  return false;
}

// f1: some non-whitespace character occurs >=3 times consecutively.
inline bool has_repeat_run(std::string_view s) {
  std::size_t run = 1;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] == s[i - 1] && !is_space_char(s[i])) {
      if (++run >= 3) return true;
    } else {
      run = 1;
    }
  }
  return false;
}

// f2: the token's letters are all uppercase (and there is at least one).
inline bool letters_all_upper(std::string_view tok) {
  bool has_letter = false;
  for (char c : tok) {
    if (c >= 'a' && c <= 'z') return false;
    if (c >= 'A' && c <= 'Z') has_letter = true;
  }
  return has_letter;
}

// f6: a character that is neither an English letter nor an apostrophe
// appears with at least one letter after it (digits or specials at the
// beginning or middle of a word; trailing punctuation does not count).
inline bool has_embedded_special(std::string_view tok) {
  std::size_t last_letter = std::string_view::npos;
  for (std::size_t i = tok.size(); i-- > 0;) {
    if (is_ascii_letter(tok[i])) {
      last_letter = i;
      break;
    }
  }
  if (last_letter == std::string_view::npos) return false;
  for (std::size_t i = 0; i < last_letter; ++i) {
    if (!is_ascii_letter(tok[i]) && tok[i] != '\'') return true;
  }
  return false;
}

inline std::size_t count_substr(std::string_view hay, std::string_view needle) {
  std::size_t n = 0;
  std::size_t pos = hay.find(needle);
  while (pos != std::string_view::npos) {
    ++n;
    pos = hay.find(needle, pos + needle.size());
  }
  return n;
}

// Tag-aware helpers below work on a lowercased copy of the body so all
// markup matching is case-insensitive.

inline bool tag_name_ends_at(std::string_view low, std::size_t pos) {
  return pos >= low.size() || !is_ascii_letter(low[pos]);
}

// f15: <img ...> occurrences lexically nested between "<a" and "</a>".
inline std::size_t clickable_image_count(std::string_view low) {
  std::size_t depth = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < low.size(); ++i) {
    if (low[i] != '<') continue;
    if (low.compare(i, 2, "</") == 0) {
      if (low.compare(i, 3, "</a") == 0 && tag_name_ends_at(low, i + 3) && depth > 0) --depth;
    } else if (low.compare(i, 2, "<a") == 0 && tag_name_ends_at(low, i + 2)) {
      ++depth;
    } else if (low.compare(i, 4, "<img") == 0 && tag_name_ends_at(low, i + 4)) {
      if (depth > 0) ++count;
    }
  }
  return count;
}

// One color declaration found in the body: the lexical property/attribute
// name and its raw value.
struct ColorDecl {
  std::string value;  // lowercased, as written (may contain spaces)
};

inline bool boundary_before(std::string_view low, std::size_t pos) {
  if (pos == 0) return true;
  const char c = low[pos - 1];
  return !((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-');
}

// f18 scanner: CSS "color:"/"background-color:" plus the HTML color
// attributes color=/bgcolor=/text=/link=/vlink=/alink=. Longest-match with
// a word boundary before the name, so "background-color:" and "bgcolor="
// each count exactly once.
inline std::vector<ColorDecl> color_declarations(std::string_view low) {
  static constexpr std::string_view kNames[] = {
      "background-color:", "bgcolor=", "vlink=", "alink=",
      "color:",            "color=",   "link=",  "text=",
  };
  std::vector<ColorDecl> decls;
  for (std::size_t i = 0; i < low.size(); ++i) {
    if (!boundary_before(low, i)) continue;
    for (std::string_view name : kNames) {
      if (low.compare(i, name.size(), name) != 0) continue;
      std::size_t v = i + name.size();
      while (v < low.size() && (low[v] == ' ' || low[v] == '\t')) ++v;
      std::string value;
      if (v < low.size() && (low[v] == '"' || low[v] == '\'')) {
        const char quote = low[v++];
        while (v < low.size() && low[v] != quote) value.push_back(low[v++]);
      } else if (name.back() == ':') {
        // unquoted CSS value runs to the end of the declaration
        while (v < low.size() && low[v] != ';' && low[v] != '}' && low[v] != '"' &&
               low[v] != '\'' && low[v] != '<' && low[v] != '>') {
          value.push_back(low[v++]);
        }
      } else {
        // unquoted HTML attribute value ends at whitespace or '>'
        while (v < low.size() && !is_space_char(low[v]) && low[v] != '>' &&
               low[v] != '"' && low[v] != '\'') {
          value.push_back(low[v++]);
        }
      }
      decls.push_back(ColorDecl{std::move(value)});
      i += name.size() - 1;  // resume after the name; values may nest more declarations
      break;
    }
  }
  return decls;
}

inline bool is_white_color(std::string_view raw) {
  std::string v;
  for (char c : raw)
    if (!is_space_char(c)) v.push_back(c);
  return v == "white" || v == "#fff" || v == "#ffffff" || v == "rgb(255,255,255)";
}

// f17: href values containing a digit or any of & % @.
inline std::size_t noisy_url_count(std::string_view low) {
  std::size_t count = 0;
  std::size_t pos = low.find("href=");
  while (pos != std::string_view::npos) {
    std::size_t v = pos + 5;
    while (v < low.size() && (low[v] == ' ' || low[v] == '\t')) ++v;
    std::string url;
    if (v < low.size() && (low[v] == '"' || low[v] == '\'')) {
      const char quote = low[v++];
      while (v < low.size() && low[v] != quote) url.push_back(low[v++]);
    } else {
      while (v < low.size() && !is_space_char(low[v]) && low[v] != '>') url.push_back(low[v++]);
    }
    for (char c : url) {
      if ((c >= '0' && c <= '9') || c == '&' || c == '%' || c == '@') {
        ++count;
        break;
      }
    }
    pos = low.find("href=", pos + 5);
  }
  return count;
}

// Scans '<'...'>' spans and reports whether any contains an attribute
// matching `prefix` + letters + '=' (for on*=) or the literal attribute.
inline bool tag_attr_present(std::string_view low, std::string_view attr,
                             bool prefix_mode) {
  std::size_t i = low.find('<');
  while (i != std::string_view::npos) {
    std::size_t close = low.find('>', i + 1);
    const std::string_view span =
        low.substr(i + 1, (close == std::string_view::npos ? low.size() : close) - i - 1);
    for (std::size_t k = 0; k + attr.size() < span.size() + 1; ++k) {
      if (k > 0) {
        const char b = span[k - 1];
        if ((b >= 'a' && b <= 'z') || (b >= '0' && b <= '9') || b == '-') continue;
      }
      if (span.compare(k, attr.size(), attr) != 0) continue;
      std::size_t p = k + attr.size();
      if (prefix_mode) {
        std::size_t letters = 0;
        while (p < span.size() && is_ascii_letter(span[p])) {
          ++p;
          ++letters;
        }
        if (letters > 0 && p < span.size() && span[p] == '=') return true;
      } else {
        if (p < span.size() && span[p] == '=') return true;
      }
    }
    if (close == std::string_view::npos) break;
    i = low.find('<', close + 1);
  }
  return false;
}

// Stylesheet link tag: a <link ...> span mentioning "stylesheet".
inline bool stylesheet_link_present(std::string_view low) {
  std::size_t i = low.find("<link");
  while (i != std::string_view::npos) {
    if (tag_name_ends_at(low, i + 5)) {
      std::size_t close = low.find('>', i);
      const std::string_view span =
          low.substr(i, (close == std::string_view::npos ? low.size() : close) - i);
      if (span.find("stylesheet") != std::string_view::npos) return true;
    }
    i = low.find("<link", i + 5);
  }
  return false;
}

}  // namespace fdetail

// Category 1 (f1-f6): signals from the subject header text.
inline std::array<double, 6> extract_subject_features(std::string_view subject) {
  std::array<double, 6> f{};
  f[0] = fdetail::has_repeat_run(subject) ? 1.0 : 0.0;
  const TokenStream ts = tokenize(subject);
  for (const std::string& tok : ts.tokens) {
    if (tok.size() >= 2 && fdetail::letters_all_upper(tok)) f[1] += 1.0;
    if (tok.size() >= 15) f[2] += 1.0;
    if (fdetail::rare_letter_count(tok) >= 2) f[3] += 1.0;
    if (fdetail::has_embedded_special(tok)) f[5] += 1.0;
  }
  for (const std::string& w : alphabetic_words(ts)) {
    if (w.size() >= 2 && !fdetail::has_vowel(w)) f[4] += 1.0;
  }
  return f;
}

// Category 2 (f7-f8): priority and content-type headers.
inline std::array<double, 2> extract_header_features(const EmailMessage& msg) {
  std::array<double, 2> f{};
  static constexpr std::string_view kPriorityHeaders[] = {"X-Priority", "Priority",
                                                          "Importance"};
  static constexpr std::string_view kNormalSet[] = {"normal", "medium", "3", "3 (normal)",
                                                    "none"};
  for (const auto& name : kPriorityHeaders) {
    const auto v = header_value(msg, name);
    if (!v) continue;
    const std::string low = detail::ascii_lower(detail::trim(*v));
    bool normal = false;
    for (const auto& ok : kNormalSet)
      if (low == ok) normal = true;
    if (!normal) {
      f[0] = 1.0;
      break;
    }
  }
  bool html = false;
  if (const auto ct = header_value(msg, "Content-Type")) {
    if (detail::media_type(*ct) == "text/html") html = true;
  }
  for (const BodyPart& p : msg.body_parts) {
    if (p.content_type == "text/html") html = true;
  }
  f[1] = html ? 1.0 : 0.0;
  return f;
}

// Category 3 (f9-f21): signals from the decoded message body. Word-level
// features (f9-f11) are computed over the HTML-stripped text; markup
// features run over the raw decoded body so obfuscation stays visible.
inline std::array<double, 13> extract_body_features(const EmailMessage& msg) {
  std::array<double, 13> f{};
  const std::string& body = msg.raw_body;

  const std::vector<std::string> words = alphabetic_words(tokenize(strip_html(body)));
  const double total = static_cast<double>(words.size());
  if (total > 0) {
    double novowel7 = 0, rare = 0, long15 = 0;
    for (const std::string& w : words) {
      if (!fdetail::has_vowel(w) && w.size() >= 7) novowel7 += 1.0;
      if (fdetail::rare_letter_count(w) >= 2) rare += 1.0;
      if (w.size() >= 15) long15 += 1.0;
    }
    f[0] = novowel7 / total;
    f[1] = rare / total;
    f[2] = long15 / total;
  }

  f[3] = (body.find("From:") != std::string::npos && body.find("To:") != std::string::npos)
             ? 1.0
             : 0.0;
  f[4] = static_cast<double>(fdetail::count_substr(body, "<!--"));

  const std::string low = detail::ascii_lower(body);
  f[5] = static_cast<double>(fdetail::count_substr(low, "href="));
  f[6] = static_cast<double>(fdetail::clickable_image_count(low));

  const std::vector<fdetail::ColorDecl> colors = fdetail::color_declarations(low);
  bool white = false;
  for (const auto& d : colors)
    if (fdetail::is_white_color(d.value)) white = true;
  f[7] = white ? 1.0 : 0.0;
  f[8] = static_cast<double>(fdetail::noisy_url_count(low));
  f[9] = static_cast<double>(colors.size());

  const bool has_script = low.find("<script") != std::string::npos;
  const bool has_on_attr = fdetail::tag_attr_present(low, "on", /*prefix_mode=*/true);
  const bool has_js_url = low.find("javascript:") != std::string::npos;
  f[10] = (has_script || has_on_attr || has_js_url) ? 1.0 : 0.0;

  const bool has_style_tag = low.find("<style") != std::string::npos;
  const bool has_style_attr = fdetail::tag_attr_present(low, "style", /*prefix_mode=*/false);
  const bool has_css_link = fdetail::stylesheet_link_present(low);
  f[11] = (has_style_tag || has_style_attr || has_css_link) ? 1.0 : 0.0;

  f[12] = low.find("<table") != std::string::npos ? 1.0 : 0.0;
  return f;
}

// Full 21-feature vector in index order; the label is left unset.
inline FeatureVector extract(const EmailMessage& msg) {
  FeatureVector v;
  const auto subj = extract_subject_features(msg.subject);
  const auto head = extract_header_features(msg);
  const auto body = extract_body_features(msg);
  std::size_t k = 0;
  for (double x : subj) v.values[k++] = x;
  for (double x : head) v.values[k++] = x;
  for (double x : body) v.values[k++] = x;
  return v;
}

// Sub-vector of the features whose category flag is set, index order
// preserved. Throws EmptyMask when no category is selected.
inline std::vector<double> project(const FeatureVector& v, const CategoryMask& mask) {
  if (!mask.any()) throw EmptyMask("category mask selects no features");
  std::vector<double> out;
  for (std::size_t i : mask.indices()) out.push_back(v.values[i]);
  return out;
}

inline std::vector<std::string> projected_feature_names(const CategoryMask& mask) {
  if (!mask.any()) throw EmptyMask("category mask selects no features");
  std::vector<std::string> out;
  for (std::size_t i : mask.indices()) out.emplace_back(kFeatureNames[i]);
  return out;
}

}  // namespace spamtk
