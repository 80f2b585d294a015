#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spamtk/errors.hpp"

namespace spamtk {

// One decoded MIME part. decoded_text is the body after the part's
// content-transfer-encoding has been undone and the bytes sanitized to
// valid UTF-8 (invalid sequences become U+FFFD).
struct BodyPart {
  std::string content_type = "text/plain";  // lowercased media type
  std::string charset;                      // declared charset, lowercased; empty if undeclared
  std::string decoded_text;
};

// A parsed message. Header names keep their original spelling; lookup via
// header_value is case-insensitive. raw_body is the in-order concatenation
// of the decoded part bodies.
struct EmailMessage {
  std::vector<std::pair<std::string, std::string>> headers;
  std::string subject;
  std::vector<BodyPart> body_parts;
  std::string raw_body;
};

namespace detail {

inline bool ascii_ieq(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

inline std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// CRLF and stray CR both become LF.
inline std::string normalize_newlines(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '\r') {
      out.push_back('\n');
      if (i + 1 < raw.size() && raw[i + 1] == '\n') ++i;
    } else {
      out.push_back(raw[i]);
    }
  }
  return out;
}

// A header line is "name: value" where name is non-empty and free of
// whitespace and control characters.
inline bool looks_like_header(std::string_view line) {
  const std::size_t colon = line.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  for (std::size_t i = 0; i < colon; ++i) {
    const unsigned char c = static_cast<unsigned char>(line[i]);
    if (c <= ' ' || c == 127) return false;
  }
  return true;
}

inline int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

// Quoted-printable: "=XX" is a byte, "=" + newline is a soft break,
// anything else passes through verbatim.
inline std::string decode_quoted_printable(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '=') {
      out.push_back(s[i]);
      continue;
    }
    if (i + 1 < s.size() && s[i + 1] == '\n') {
      ++i;  // soft line break
      continue;
    }
    if (i + 2 < s.size()) {
      const int hi = hex_digit(s[i + 1]);
      const int lo = hex_digit(s[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
        continue;
      }
    }
    out.push_back('=');
  }
  return out;
}

inline int base64_value(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

// Base64 with whitespace and junk characters skipped; a trailing partial
// group is decoded as far as it goes.
inline std::string decode_base64(std::string_view s) {
  std::string out;
  out.reserve(s.size() * 3 / 4 + 3);
  int acc = 0;
  int bits = 0;
  for (char c : s) {
    if (c == '=') break;
    const int v = base64_value(c);
    if (v < 0) continue;
    acc = (acc << 6) | v;
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<char>((acc >> bits) & 0xFF));
    }
  }
  return out;
}

// Replace invalid UTF-8 sequences with U+FFFD so downstream text handling
// always sees well-formed UTF-8.
inline std::string utf8_sanitize(std::string_view s) {
  static constexpr char kRepl[] = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
      ++i;
      continue;
    }
    int len = 0;
    unsigned cp = 0;
    if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      out.append(kRepl);
      ++i;
      continue;
    }
    bool ok = i + static_cast<std::size_t>(len) <= s.size();
    for (int k = 1; ok && k < len; ++k) {
      const unsigned char cc = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
      if ((cc & 0xC0) != 0x80) {
        ok = false;
      } else {
        cp = (cp << 6) | (cc & 0x3F);
      }
    }
    if (ok) {
      // reject overlong forms, surrogates and out-of-range code points
      if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
          (len == 4 && cp < 0x10000) || (cp >= 0xD800 && cp <= 0xDFFF) ||
          cp > 0x10FFFF) {
        ok = false;
      }
    }
    if (ok) {
      out.append(s.substr(i, static_cast<std::size_t>(len)));
      i += static_cast<std::size_t>(len);
    } else {
      out.append(kRepl);
      ++i;
    }
  }
  return out;
}

// Extracts a named parameter ("boundary", "charset") from a structured
// header value such as 'multipart/mixed; boundary="b1"'.
inline std::optional<std::string> mime_param(std::string_view header_value,
                                             std::string_view name) {
  std::size_t pos = header_value.find(';');
  while (pos != std::string_view::npos) {
    std::string_view rest = header_value.substr(pos + 1);
    const std::size_t next = rest.find(';');
    std::string_view item = trim(next == std::string_view::npos ? rest : rest.substr(0, next));
    const std::size_t eq = item.find('=');
    if (eq != std::string_view::npos && ascii_ieq(trim(item.substr(0, eq)), name)) {
      std::string_view v = trim(item.substr(eq + 1));
      if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) {
        v = v.substr(1, v.size() - 2);
      }
      return std::string(v);
    }
    pos = next == std::string_view::npos ? next : pos + 1 + next;
  }
  return std::nullopt;
}

inline std::string media_type(std::string_view content_type) {
  const std::size_t semi = content_type.find(';');
  return ascii_lower(trim(content_type.substr(0, semi == std::string_view::npos
                                                     ? content_type.size()
                                                     : semi)));
}

using HeaderList = std::vector<std::pair<std::string, std::string>>;

inline std::optional<std::string> find_header(const HeaderList& headers,
                                              std::string_view name) {
  for (const auto& [n, v] : headers) {
    if (ascii_ieq(n, name)) return v;
  }
  return std::nullopt;
}

// Splits a normalized block into (headers, body). Folded continuation
// lines are joined with a single space. With no blank-line separator the
// parse is best-effort: leading header lines are consumed and the rest
// becomes the body. Junk lines inside a proper header block are skipped.
struct HeaderParse {
  HeaderList headers;
  std::string body;
  bool had_separator = false;
};

inline void parse_header_block(std::string_view block, bool skip_junk,
                               HeaderParse& result, std::size_t& consumed) {
  std::size_t pos = 0;
  while (pos < block.size()) {
    std::size_t eol = block.find('\n', pos);
    if (eol == std::string_view::npos) eol = block.size();
    const std::string_view line = block.substr(pos, eol - pos);
    if (line.empty()) {
      pos = eol == block.size() ? block.size() : eol + 1;
      continue;
    }
    if ((line.front() == ' ' || line.front() == '\t') && !result.headers.empty()) {
      // folded continuation: unfold with one space at the fold point
      std::string& value = result.headers.back().second;
      const std::string_view cont = trim(line);
      if (!cont.empty()) {
        if (!value.empty()) value.push_back(' ');
        value.append(cont);
      }
    } else if (looks_like_header(line)) {
      const std::size_t colon = line.find(':');
      result.headers.emplace_back(std::string(trim(line.substr(0, colon))),
                                  std::string(trim(line.substr(colon + 1))));
    } else if (!skip_junk) {
      consumed = pos;
      return;
    }
    pos = eol == block.size() ? block.size() : eol + 1;
  }
  consumed = block.size();
}

inline HeaderParse split_headers_body(std::string_view text) {
  HeaderParse result;
  std::size_t sep;
  if (!text.empty() && text.front() == '\n') {
    sep = 0;
  } else {
    sep = text.find("\n\n");
    if (sep != std::string_view::npos) ++sep;  // point at the blank line
  }
  std::size_t consumed = 0;
  if (sep != std::string_view::npos) {
    // proper block: junk lines inside it are skipped
    result.had_separator = true;
    parse_header_block(text.substr(0, sep), /*skip_junk=*/true, result, consumed);
    result.body = std::string(text.substr(std::min(sep + 1, text.size())));
  } else {
    // no separator: leading header lines, the rest is body
    parse_header_block(text, /*skip_junk=*/false, result, consumed);
    result.body = std::string(text.substr(consumed));
  }
  return result;
}

inline constexpr int kMaxMultipartDepth = 8;

inline void decode_entity_body(const HeaderList& part_headers, std::string_view body,
                               int depth, std::vector<BodyPart>& out);

// Splits a multipart body on its boundary markers and recurses into each
// part. Preamble and epilogue are dropped.
inline void split_multipart(std::string_view body, const std::string& boundary,
                            int depth, std::vector<BodyPart>& out) {
  const std::string open = "--" + boundary;
  std::vector<std::string_view> segments;
  std::size_t pos = 0;
  std::size_t seg_start = std::string_view::npos;
  bool closed = false;
  while (pos <= body.size() && !closed) {
    std::size_t eol = body.find('\n', pos);
    if (eol == std::string_view::npos) eol = body.size();
    const std::string_view line = body.substr(pos, eol - pos);
    const std::string_view l = trim(line);
    if (l.size() >= open.size() && l.substr(0, open.size()) == open) {
      if (seg_start != std::string_view::npos) {
        segments.push_back(body.substr(seg_start, pos - seg_start));
      }
      if (l.size() >= open.size() + 2 && l.substr(open.size(), 2) == "--") {
        closed = true;
      } else {
        seg_start = eol + 1;
      }
    }
    if (eol == body.size()) break;
    pos = eol + 1;
  }
  if (!closed && seg_start != std::string_view::npos && seg_start <= body.size()) {
    segments.push_back(body.substr(seg_start));
  }
  for (std::string_view seg : segments) {
    HeaderParse part = split_headers_body(seg);
    decode_entity_body(part.headers, part.body, depth + 1, out);
  }
}

// Decodes one MIME entity (headers + body) into flat BodyParts.
inline void decode_entity_body(const HeaderList& part_headers, std::string_view body,
                               int depth, std::vector<BodyPart>& out) {
  const std::optional<std::string> ct = find_header(part_headers, "Content-Type");
  const std::string media = ct ? media_type(*ct) : std::string("text/plain");
  if (ct && media.rfind("multipart/", 0) == 0 && depth < kMaxMultipartDepth) {
    if (const auto boundary = mime_param(*ct, "boundary"); boundary && !boundary->empty()) {
      split_multipart(body, *boundary, depth, out);
      return;
    }
  }
  BodyPart part;
  part.content_type = media.empty() ? std::string("text/plain") : media;
  if (ct) {
    if (const auto cs = mime_param(*ct, "charset")) part.charset = ascii_lower(*cs);
  }
  std::string text(body);
  if (const auto cte = find_header(part_headers, "Content-Transfer-Encoding")) {
    const std::string enc = ascii_lower(trim(*cte));
    if (enc == "quoted-printable") {
      text = decode_quoted_printable(text);
    } else if (enc == "base64") {
      text = decode_base64(text);
    }
    // 7bit / 8bit / binary / unknown: pass through verbatim
  }
  part.decoded_text = utf8_sanitize(text);
  out.push_back(std::move(part));
}

}  // namespace detail

// Case-insensitive lookup of the first header with the given name.
inline std::optional<std::string> header_value(const EmailMessage& msg,
                                               std::string_view name) {
  return detail::find_header(msg.headers, name);
}

// Parses one RFC-822-style message. Throws MalformedMessage only when the
// input has no header/body separator and no line that looks like a header;
// everything else is parsed best-effort (spam is often malformed by design).
inline EmailMessage parse_eml(std::string_view raw) {
  const std::string text = detail::normalize_newlines(raw);
  detail::HeaderParse top = detail::split_headers_body(text);
  if (!top.had_separator && top.headers.empty()) {
    throw MalformedMessage("no header/body separator and no header line");
  }
  EmailMessage msg;
  msg.headers = std::move(top.headers);
  if (const auto subj = header_value(msg, "Subject")) msg.subject = *subj;
  detail::decode_entity_body(msg.headers, top.body, 0, msg.body_parts);
  for (const BodyPart& p : msg.body_parts) msg.raw_body += p.decoded_text;
  return msg;
}

// Splits an mbox archive on "From " separator lines and parses each
// segment. ">From " escaping inside bodies is undone. Garbage segments are
// dropped rather than failing the archive.
inline std::vector<EmailMessage> parse_mbox(std::string_view raw) {
  const std::string text = detail::normalize_newlines(raw);
  std::vector<EmailMessage> out;
  if (detail::trim(text).empty()) return out;

  std::vector<std::size_t> starts;  // offsets of "From " separator lines
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text.compare(pos, 5, "From ") == 0) starts.push_back(pos);
    const std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }

  std::vector<std::string> segments;
  if (starts.empty()) {
    segments.emplace_back(text);
  } else {
    if (starts.front() > 0) {
      const std::string lead = text.substr(0, starts.front());
      if (!detail::trim(lead).empty()) segments.push_back(lead);
    }
    for (std::size_t s = 0; s < starts.size(); ++s) {
      std::size_t body_begin = text.find('\n', starts[s]);
      body_begin = body_begin == std::string::npos ? text.size() : body_begin + 1;
      const std::size_t end = s + 1 < starts.size() ? starts[s + 1] : text.size();
      if (body_begin < end) segments.push_back(text.substr(body_begin, end - body_begin));
    }
  }

  for (std::string& seg : segments) {
    // un-escape ">From " at line starts within the body region
    const std::size_t sep = seg.find("\n\n");
    std::string unescaped;
    if (sep != std::string::npos) {
      unescaped = seg.substr(0, sep + 2);
      std::string_view body(seg);
      body.remove_prefix(sep + 2);
      std::size_t line = 0;
      while (line <= body.size()) {
        std::size_t eol = body.find('\n', line);
        if (eol == std::string_view::npos) eol = body.size();
        std::string_view lv = body.substr(line, eol - line);
        std::size_t gt = 0;
        while (gt < lv.size() && lv[gt] == '>') ++gt;
        if (gt > 0 && lv.substr(gt).rfind("From ", 0) == 0) {
          unescaped.append(lv.substr(1));  // drop one '>'
        } else {
          unescaped.append(lv);
        }
        if (eol == body.size()) break;
        unescaped.push_back('\n');
        line = eol + 1;
      }
    } else {
      unescaped = seg;
    }
    try {
      out.push_back(parse_eml(unescaped));
    } catch (const MalformedMessage&) {
      // skip unparseable segments
    }
  }
  return out;
}

}  // namespace spamtk
