#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace spamtk {

// Maximal whitespace-delimited runs of the source text.
struct TokenStream {
  std::vector<std::string> tokens;
  std::size_t source_length = 0;
};

namespace detail {

inline bool is_space_char(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline bool is_ascii_letter(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
}

// Encode a code point as UTF-8; invalid code points yield U+FFFD.
inline void append_utf8(std::string& out, unsigned cp) {
  if ((cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) cp = 0xFFFD;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline bool ieq_at(std::string_view s, std::size_t pos, std::string_view lit) {
  if (pos + lit.size() > s.size()) return false;
  for (std::size_t i = 0; i < lit.size(); ++i) {
    char a = s[pos + i];
    if (a >= 'A' && a <= 'Z') a = static_cast<char>(a - 'A' + 'a');
    if (a != lit[i]) return false;
  }
  return true;
}

// Decode &amp; &lt; &gt; &quot; &apos; &nbsp; and numeric &#NNN; / &#xHH;.
// Anything unrecognized or unterminated passes through verbatim.
inline std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    const std::size_t semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back(s[i++]);
      continue;
    }
    const std::string_view name = s.substr(i + 1, semi - i - 1);
    bool decoded = true;
    if (name == "amp") {
      out.push_back('&');
    } else if (name == "lt") {
      out.push_back('<');
    } else if (name == "gt") {
      out.push_back('>');
    } else if (name == "quot") {
      out.push_back('"');
    } else if (name == "apos") {
      out.push_back('\'');
    } else if (name == "nbsp") {
      out.push_back(' ');
    } else if (name.size() >= 2 && name[0] == '#') {
      unsigned cp = 0;
      bool ok = true;
      if (name[1] == 'x' || name[1] == 'X') {
        ok = name.size() > 2;
        for (std::size_t k = 2; ok && k < name.size(); ++k) {
          const char c = name[k];
          int d = -1;
          if (c >= '0' && c <= '9') d = c - '0';
          else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
          else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
          if (d < 0) ok = false;
          else cp = cp * 16 + static_cast<unsigned>(d);
        }
      } else {
        for (std::size_t k = 1; ok && k < name.size(); ++k) {
          const char c = name[k];
          if (c < '0' || c > '9') ok = false;
          else cp = cp * 10 + static_cast<unsigned>(c - '0');
        }
      }
      if (ok) append_utf8(out, cp);
      decoded = ok;
    } else {
      decoded = false;
    }
    if (decoded) {
      i = semi + 1;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

}  // namespace detail

// Tokens are maximal runs of non-whitespace characters; whitespace is
// space, tab, line break, carriage return, form feed and vertical tab.
inline TokenStream tokenize(std::string_view text) {
  TokenStream ts;
  ts.source_length = text.size();
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && detail::is_space_char(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !detail::is_space_char(text[i])) ++i;
    if (i > start) ts.tokens.emplace_back(text.substr(start, i - start));
  }
  return ts;
}

// Tokens made only of English letters (A-Z, a-z) and apostrophes, with at
// least one letter. The apostrophe is ASCII 0x27 only.
inline std::vector<std::string> alphabetic_words(const TokenStream& ts) {
  std::vector<std::string> words;
  for (const std::string& tok : ts.tokens) {
    bool has_letter = false;
    bool ok = true;
    for (char c : tok) {
      if (detail::is_ascii_letter(c)) {
        has_letter = true;
      } else if (c != '\'') {
        ok = false;
        break;
      }
    }
    if (ok && has_letter) words.push_back(tok);
  }
  return words;
}

// Visible-text approximation of an HTML body: comments, tags, and
// script/style element contents are dropped in a single pass, then the
// small entity set is decoded. Entity decoding runs after tag removal so
// a decoded "<" cannot re-open a tag. A "<" that does not start a tag
// (not followed by a letter, '/', '!' or '?') stays literal text.
inline std::string strip_html(std::string_view text) {
  std::string visible;
  visible.reserve(text.size());
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (text[i] != '<') {
      visible.push_back(text[i++]);
      continue;
    }
    if (text.compare(i, 4, "<!--") == 0) {
      const std::size_t end = text.find("-->", i + 4);
      i = end == std::string_view::npos ? n : end + 3;
      continue;
    }
    const char next = i + 1 < n ? text[i + 1] : '\0';
    if (!(detail::is_ascii_letter(next) || next == '/' || next == '!' || next == '?')) {
      visible.push_back(text[i++]);
      continue;
    }
    // collect the tag name to recognize script/style elements
    std::size_t p = i + 1;
    std::string name;
    while (p < n && detail::is_ascii_letter(text[p])) {
      char c = text[p++];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      name.push_back(c);
    }
    std::size_t close = text.find('>', i + 1);
    if (close == std::string_view::npos) {
      i = n;  // unterminated tag: removed to end of input
      continue;
    }
    i = close + 1;
    if (name == "script" || name == "style") {
      // drop the element contents along with the tags
      const std::string closer = "</" + name;
      std::size_t scan = i;
      std::size_t found = std::string_view::npos;
      while (scan + closer.size() <= n) {
        if (detail::ieq_at(text, scan, closer)) {
          found = scan;
          break;
        }
        ++scan;
      }
      if (found == std::string_view::npos) {
        i = n;
      } else {
        const std::size_t gt = text.find('>', found);
        i = gt == std::string_view::npos ? n : gt + 1;
      }
    }
  }
  return detail::decode_entities(visible);
}

}  // namespace spamtk
