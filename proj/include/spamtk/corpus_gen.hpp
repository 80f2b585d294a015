#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spamtk/errors.hpp"
#include "spamtk/features.hpp"
#include "spamtk/rng.hpp"

namespace spamtk {

// Obfuscation tricks a generated spam message may carry. Ham messages use
// none of these except the occasional benign color/priority noise.
enum class Trick {
  comment_split,    // brand word chopped up by HTML comments
  invisible_ink,    // white-on-white keyword block
  html_numbers,     // numeric character references spelling a word
  priority_boost,   // high-priority header
  html_body,        // text/html instead of plain text
  noisy_links,      // tracking URLs full of digits and delimiters
  color_burst,      // loud font/background color declarations
  script_use,       // script tag / event handler / javascript: URL
  table_layout,     // table-based layout
  fake_text,        // gibberish word padding
  clickable_image,  // linked image banner
  css_style,        // style tag or attribute
  from_to_literal,  // quoted forwarded-mail header block
};

// Per-trick injection probabilities for spam messages. Ham noise rates
// (the occasional HTML ham, benign color, priority header) are fixed
// internals of the generator.
inline std::map<Trick, double> default_trick_mix() {
  return {
      {Trick::comment_split, 0.50}, {Trick::invisible_ink, 0.30},
      {Trick::html_numbers, 0.30},  {Trick::priority_boost, 0.45},
      {Trick::html_body, 0.95},     {Trick::noisy_links, 0.55},
      {Trick::color_burst, 0.55},   {Trick::script_use, 0.35},
      {Trick::table_layout, 0.45},  {Trick::fake_text, 0.35},
  };
}

struct GenSpec {
  std::size_t n = 1000;
  double spam_ratio = 0.5;
  std::uint64_t seed = 42;
  std::map<Trick, double> trick_mix = default_trick_mix();

  double p(Trick t) const {
    const auto it = trick_mix.find(t);
    return it == trick_mix.end() ? 0.0 : it->second;
  }

  std::size_t spam_count() const {
    return static_cast<std::size_t>(static_cast<double>(n) * spam_ratio + 0.5);
  }

  void validate() const {
    if (n < 2) throw Error("corpus needs at least 2 messages");
    const std::size_t n_spam = spam_count();
    if (n_spam == 0 || n_spam >= n)
      throw Error("spam ratio must leave at least one message in each class");
    for (const auto& [trick, prob] : trick_mix) {
      (void)trick;
      if (prob < 0.0 || prob > 1.0) throw Error("trick probabilities must lie in [0, 1]");
    }
  }
};

struct GeneratedMessage {
  std::string id;
  Label label = Label::ham;
  std::string eml;                // complete RFC-822 style text
  std::vector<Trick> tricks;      // what was injected (diagnostics/tests)
};

struct ManifestEntry {
  std::string id;
  std::string path;  // relative to the corpus root
  Label label = Label::ham;
};

namespace gdetail {

inline constexpr std::string_view kHamWords[] = {
    "the",      "and",     "for",      "with",    "that",    "this",    "from",
    "have",     "will",    "your",     "about",   "meeting", "project", "report",
    "update",   "schedule","team",     "review",  "draft",   "notes",   "please",
    "thanks",   "regards", "tomorrow", "friday",  "monday",  "week",    "next",
    "plan",     "agenda",  "budget",   "client",  "invoice", "question","answer",
    "detail",   "change",  "release",  "version", "feature", "test",    "build",
    "server",   "office",  "coffee",   "lunch",   "family",  "weekend", "photos",
    "trip",     "garden",  "recipe",   "book",    "music",   "concert", "ticket",
    "weather",  "morning", "evening",  "afternoon","call",   "phone",   "email",
    "document", "folder",  "printer",  "laptop",  "kitchen", "window",  "street",
    "house",    "road",    "river",    "mountain","holiday", "travel",  "flight",
    "hotel",    "dinner",  "birthday", "party",   "present", "winter",  "summer",
    "spring",   "autumn",  "season",   "library", "school",  "course",  "lesson",
    "homework", "paper",   "article",  "news",    "little",  "around",  "should",
    "between",  "another", "thought",  "together","probably","yesterday",
};

inline constexpr std::string_view kSpamWords[] = {
    "free",     "winner",   "cash",     "prize",    "offer",   "limited",
    "guarantee","million",  "dollars",  "discount", "cheap",   "pills",
    "casino",   "lottery",  "claim",    "urgent",   "click",   "here",
    "credit",   "loan",     "mortgage", "insurance","weight",  "loss",
    "miracle",  "cure",     "investment","profit",  "rich",    "money",
    "bonus",    "exclusive","deal",     "trial",    "risk",    "approved",
    "viagra",   "unsubscribe","act",    "now",
};

inline constexpr std::string_view kHamSubjects[] = {
    "Meeting notes",
    "Project update",
    "Lunch on Friday?",
    "Quarterly report draft",
    "Re: schedule change",
    "Team review agenda",
    "Notes from the client call",
    "Draft budget for review",
    "Weekend plans",
    "Photos from the trip",
    "Re: invoice question",
    "Printer on the second floor",
    "Book recommendation",
    "Concert tickets",
    "Garden update",
    "Re: travel plans",
    "Dinner on Saturday",
    "Library course materials",
    "Homework question",
    "News article you mentioned",
    "Coffee tomorrow morning?",
    "Release checklist",
    "Server maintenance window",
    "Holiday schedule",
    "Re: meeting at 3pm",
};

inline constexpr std::string_view kSpamSubjects[] = {
    "special offer inside",
    "your account statement",
    "important notice",
    "re: your request",
    "delivery confirmation",
    "about your subscription",
    "account verification needed",
    "payment reminder",
    "new message waiting",
    "exclusive invitation",
    "your order status",
    "limited time savings",
};

inline constexpr std::string_view kShoutWords[] = {
    "FREE", "WINNER", "CASH", "URGENT", "BONUS", "PRIZE", "OFFER", "DEAL", "NOW",
};

inline constexpr std::string_view kFirstNames[] = {
    "alice", "bob",  "carol", "dave",  "erin",  "frank", "grace", "heidi",
    "ivan",  "judy", "mallory","nadia", "oscar", "peggy", "ruth",  "sybil",
};

inline constexpr std::string_view kSpamDomains[] = {
    "bulkblast.example", "megapromo.example", "winbig.example", "dealstorm.example",
};

inline constexpr std::string_view kWeekdays[] = {"Mon", "Tue", "Wed", "Thu",
                                                 "Fri", "Sat", "Sun"};
inline constexpr std::string_view kMonths[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                               "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

template <std::size_t N>
std::string_view pick(Rng& rng, const std::string_view (&arr)[N]) {
  return arr[rng.below(N)];
}

inline std::string consonant_word(Rng& rng, std::size_t min_len, std::size_t max_len) {
  static constexpr std::string_view kConsonants = "bcdfghjklmnpqrstvwxz";
  const std::size_t len = min_len + rng.below(max_len - min_len + 1);
  std::string w;
  for (std::size_t i = 0; i < len; ++i) w += kConsonants[rng.below(kConsonants.size())];
  return w;
}

// at least two of J K Q X Z so the rare-letter counters fire
inline std::string rare_word(Rng& rng) {
  static constexpr std::string_view kRare = "jkqxz";
  std::string w = consonant_word(rng, 4, 7);
  const std::size_t a = rng.below(w.size());
  std::size_t b = rng.below(w.size());
  if (b == a) b = (b + 1) % w.size();
  w[a] = kRare[rng.below(kRare.size())];
  w[b] = kRare[rng.below(kRare.size())];
  return w;
}

inline std::string long_word(Rng& rng) {
  static constexpr std::string_view kLetters = "abcdefghijklmnopqrstuvwxyz";
  const std::size_t len = 15 + rng.below(8);
  std::string w;
  for (std::size_t i = 0; i < len; ++i) w += kLetters[rng.below(kLetters.size())];
  return w;
}

// digit look-alike substitution somewhere before the last letter
inline std::string leet_word(Rng& rng, std::string w) {
  static constexpr std::pair<char, char> kSwaps[] = {
      {'a', '4'}, {'e', '3'}, {'i', '1'}, {'o', '0'}, {'s', '5'},
  };
  std::vector<std::size_t> spots;
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    for (const auto& [from, to] : kSwaps)
      if (w[i] == from) spots.push_back(i);
  if (spots.empty()) {
    if (w.size() >= 2) w.insert(1, 1, '1');  // force a digit before trailing letters
    return w;
  }
  const std::size_t at = spots[rng.below(spots.size())];
  for (const auto& [from, to] : kSwaps)
    if (w[at] == from) w[at] = to;
  return w;
}

inline std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

inline std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  return out;
}

inline std::string sentence(Rng& rng, bool spammy) {
  const std::size_t len = 6 + rng.below(7);
  std::string s;
  for (std::size_t i = 0; i < len; ++i) {
    if (i) s += ' ';
    const bool from_spam_bank = spammy && rng.bernoulli(0.45);
    s += from_spam_bank ? pick(rng, kSpamWords) : pick(rng, kHamWords);
  }
  s = capitalize(std::move(s));
  s += '.';
  return s;
}

inline std::string paragraph(Rng& rng, bool spammy) {
  const std::size_t n = 2 + rng.below(3);
  std::string p;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) p += ' ';
    p += sentence(rng, spammy);
  }
  return p;
}

// greedy wrap so plain-text lines stay near classic mail width
inline std::string wrap_text(const std::string& text, std::size_t width = 72) {
  std::string out;
  std::size_t line_len = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = text.find(' ', i);
    if (j == std::string::npos) j = text.size();
    const std::size_t wlen = j - i;
    if (line_len > 0 && line_len + 1 + wlen > width) {
      out += '\n';
      line_len = 0;
    } else if (line_len > 0) {
      out += ' ';
      ++line_len;
    }
    out.append(text, i, wlen);
    line_len += wlen;
    i = j + 1;
  }
  return out;
}

inline std::string comment_split_word(Rng& rng, std::string_view word) {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    out += word[i];
    if (i + 1 < word.size()) {
      out += "<!-- ";
      out += pick(rng, kHamWords);
      out += " -->";
    }
  }
  return out;
}

inline std::string entity_spelled_word(std::string_view word) {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i % 2 == 0)
      out += "&#" + std::to_string(static_cast<int>(word[i])) + ";";
    else
      out += word[i];
  }
  return out;
}

inline std::string noisy_url(Rng& rng) {
  std::string url = "http://track.";
  url += pick(rng, kSpamDomains);
  url += "/r?id=" + std::to_string(10000 + rng.below(90000));
  url += "&u=" + std::to_string(rng.below(1000));
  if (rng.bernoulli(0.4)) url += "&p=x%20y";
  return url;
}

inline std::string clean_url(Rng& rng) {
  std::string url = "https://intranet.example.org/";
  url += pick(rng, kHamWords);
  url += "/";
  url += pick(rng, kHamWords);
  return url;
}

inline std::string date_header(Rng& rng) {
  const int year = 2018 + static_cast<int>(rng.below(5));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s, %02d %s %d %02d:%02d:%02d +0000",
                std::string(pick(rng, kWeekdays)).c_str(),
                1 + static_cast<int>(rng.below(28)),
                std::string(pick(rng, kMonths)).c_str(), year,
                static_cast<int>(rng.below(24)), static_cast<int>(rng.below(60)),
                static_cast<int>(rng.below(60)));
  return buf;
}

inline std::string qp_encode(const std::string& text) {
  std::string out;
  std::size_t line_len = 0;
  for (char c : text) {
    if (c == '\n') {
      out += '\n';
      line_len = 0;
      continue;
    }
    const unsigned char u = static_cast<unsigned char>(c);
    std::string enc;
    if (c == '=' || u > 126 || (u < 32 && c != '\t')) {
      static const char* hex = "0123456789ABCDEF";
      enc = {'=', hex[u >> 4], hex[u & 0xF]};
    } else {
      enc = {c};
    }
    if (line_len + enc.size() > 72) {
      out += "=\n";  // soft break
      line_len = 0;
    }
    out += enc;
    line_len += enc.size();
  }
  return out;
}

inline std::string b64_encode(const std::string& data) {
  static constexpr std::string_view kAlpha =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  std::size_t line_len = 0;
  auto emit = [&](char c) {
    out += c;
    if (++line_len == 76) {
      out += '\n';
      line_len = 0;
    }
  };
  std::size_t i = 0;
  while (i + 2 < data.size()) {
    const unsigned v = (static_cast<unsigned char>(data[i]) << 16) |
                       (static_cast<unsigned char>(data[i + 1]) << 8) |
                       static_cast<unsigned char>(data[i + 2]);
    emit(kAlpha[(v >> 18) & 63]);
    emit(kAlpha[(v >> 12) & 63]);
    emit(kAlpha[(v >> 6) & 63]);
    emit(kAlpha[v & 63]);
    i += 3;
  }
  const std::size_t rest = data.size() - i;
  if (rest == 1) {
    const unsigned v = static_cast<unsigned char>(data[i]) << 16;
    emit(kAlpha[(v >> 18) & 63]);
    emit(kAlpha[(v >> 12) & 63]);
    emit('=');
    emit('=');
  } else if (rest == 2) {
    const unsigned v = (static_cast<unsigned char>(data[i]) << 16) |
                       (static_cast<unsigned char>(data[i + 1]) << 8);
    emit(kAlpha[(v >> 18) & 63]);
    emit(kAlpha[(v >> 12) & 63]);
    emit(kAlpha[(v >> 6) & 63]);
    emit('=');
  }
  if (line_len != 0) out += '\n';
  return out;
}

struct SubjectPlan {
  std::string text;
};

inline std::string ham_subject(Rng& rng) {
  std::string s(pick(rng, kHamSubjects));
  // small doses of shouty noise keep the subject category imperfect for
  // ham too, not just uninformative for spam
  if (rng.bernoulli(0.06)) s = "FYI: " + s;
  if (rng.bernoulli(0.02)) s += " RSVP";
  if (rng.bernoulli(0.015)) s += "!!!";
  return s;
}

inline std::string spam_subject(Rng& rng, bool tricky) {
  std::string s(pick(rng, kSpamSubjects));
  if (!tricky) return s;
  const std::size_t n_tricks = 1 + (rng.bernoulli(0.35) ? 1 : 0);
  for (std::size_t t = 0; t < n_tricks; ++t) {
    switch (rng.below(6)) {
      case 0: {  // shouting
        std::string w(pick(rng, kShoutWords));
        if (rng.bernoulli(0.5)) w += ' ' + std::string(pick(rng, kShoutWords));
        s = w + ": " + s;
        break;
      }
      case 1:  // character repetition
        if (rng.bernoulli(0.5)) {
          s += "!!!";
        } else {
          s = "FREEEE " + s;
        }
        break;
      case 2: {  // digit look-alikes
        std::string w(pick(rng, kSpamWords));
        s += ' ' + leet_word(rng, std::move(w));
        break;
      }
      case 3:  // rare letters
        s += ' ' + upper(rare_word(rng));
        break;
      case 4: {  // vowel-free yelling
        std::string w = consonant_word(rng, 4, 6);
        s += ' ' + upper(w);
        break;
      }
      default:  // one very long run-on token
        s += ' ' + long_word(rng);
        break;
    }
  }
  return s;
}

struct BodyPlan {
  std::string plain;           // always present (plain alternative / fallback)
  std::string html;            // non-empty when the message carries HTML
  bool has_html = false;
};

inline std::string spam_html_body(Rng& rng, const GenSpec& spec,
                                  std::vector<Trick>& tricks) {
  std::string b = "<html><body>\n";

  if (rng.bernoulli(spec.p(Trick::table_layout))) {
    tricks.push_back(Trick::table_layout);
    b += "<table width=\"600\"><tr><td>\n";
  }

  if (rng.bernoulli(spec.p(Trick::comment_split))) {
    tricks.push_back(Trick::comment_split);
    b += "<p><b>" + comment_split_word(rng, upper(pick(rng, kSpamWords))) + "</b></p>\n";
  }
  if (rng.bernoulli(spec.p(Trick::html_numbers))) {
    tricks.push_back(Trick::html_numbers);
    b += "<p>" + entity_spelled_word(pick(rng, kSpamWords)) + " " +
         entity_spelled_word(pick(rng, kSpamWords)) + "</p>\n";
  }

  b += "<p>" + paragraph(rng, true) + "</p>\n";

  if (rng.bernoulli(spec.p(Trick::color_burst))) {
    tricks.push_back(Trick::color_burst);
    static constexpr std::string_view kLoud[] = {"red", "#ff0000", "yellow", "#00ff00",
                                                 "blue", "#ff00ff"};
    const std::size_t n = 1 + rng.below(3);
    for (std::size_t i = 0; i < n; ++i) {
      b += "<font color=\"" + std::string(pick(rng, kLoud)) + "\">" +
           std::string(pick(rng, kSpamWords)) + " " + std::string(pick(rng, kSpamWords)) +
           "</font> ";
    }
    b += "\n";
  }
  if (rng.bernoulli(spec.p(Trick::invisible_ink))) {
    tricks.push_back(Trick::invisible_ink);
    b += "<p style=\"color: white\">";
    const std::size_t n = 6 + rng.below(6);
    for (std::size_t i = 0; i < n; ++i) {
      if (i) b += ' ';
      b += pick(rng, kSpamWords);
    }
    b += "</p>\n";
  }

  if (rng.bernoulli(spec.p(Trick::noisy_links))) {
    tricks.push_back(Trick::noisy_links);
    const std::size_t n = 2 + rng.below(4);
    for (std::size_t i = 0; i < n; ++i)
      b += "<a href=\"" + noisy_url(rng) + "\">" + std::string(pick(rng, kSpamWords)) +
           " " + std::string(pick(rng, kSpamWords)) + "</a><br>\n";
  }
  if (rng.bernoulli(0.4)) {
    tricks.push_back(Trick::clickable_image);
    b += "<a href=\"" + noisy_url(rng) + "\"><img src=\"banner" +
         std::to_string(rng.below(90)) + ".gif\" width=\"468\" height=\"60\"></a>\n";
  }
  if (rng.bernoulli(spec.p(Trick::script_use))) {
    tricks.push_back(Trick::script_use);
    switch (rng.below(3)) {
      case 0: b += "<script>window.status='ok';</script>\n"; break;
      case 1: b += "<img src=\"p.gif\" onload=\"track()\">\n"; break;
      default: b += "<a href=\"javascript:openwin()\">" +
                    std::string(pick(rng, kSpamWords)) + "</a>\n";
    }
  }
  if (rng.bernoulli(0.45)) {
    tricks.push_back(Trick::css_style);
    if (rng.bernoulli(0.5))
      b += "<style> .promo { font-size: 22px } </style>\n";
    else
      b += "<div style=\"font-weight: bold\">" + sentence(rng, true) + "</div>\n";
  }
  if (rng.bernoulli(spec.p(Trick::fake_text))) {
    tricks.push_back(Trick::fake_text);
    b += "<p>";
    const std::size_t n = 18 + rng.below(20);
    for (std::size_t i = 0; i < n; ++i) {
      if (i) b += ' ';
      switch (rng.below(4)) {
        case 0: b += consonant_word(rng, 7, 10); break;
        case 1: b += rare_word(rng); break;
        case 2: b += long_word(rng); break;
        default: b += pick(rng, kHamWords);
      }
    }
    b += "</p>\n";
  }
  if (rng.bernoulli(0.25)) {
    tricks.push_back(Trick::from_to_literal);
    b += "<pre>From: " + std::string(pick(rng, kFirstNames)) +
         "@example.org\nTo: you@example.org\nGreat news below.</pre>\n";
  }

  b += "<p>" + paragraph(rng, true) + "</p>\n";
  if (std::find(tricks.begin(), tricks.end(), Trick::table_layout) != tricks.end())
    b += "</td></tr></table>\n";
  b += "</body></html>\n";
  return b;
}

inline std::string spam_plain_body(Rng& rng, const GenSpec& spec,
                                   std::vector<Trick>& tricks) {
  std::string b = wrap_text(paragraph(rng, true)) + "\n\n" + wrap_text(paragraph(rng, true)) +
                  "\n";
  if (rng.bernoulli(std::min(1.0, spec.p(Trick::fake_text) + 0.15))) {
    tricks.push_back(Trick::fake_text);
    std::string salad;
    const std::size_t n = 12 + rng.below(12);
    for (std::size_t i = 0; i < n; ++i) {
      if (i) salad += ' ';
      salad += rng.bernoulli(0.5) ? consonant_word(rng, 7, 10) : rare_word(rng);
    }
    b += "\n" + wrap_text(salad) + "\n";
  }
  if (rng.bernoulli(0.25)) {
    tricks.push_back(Trick::from_to_literal);
    b += "\nFrom: promotions@" + std::string(pick(rng, kSpamDomains)) +
         "\nTo: you@example.org\n" + sentence(rng, true) + "\n";
  }
  b += "\n" + wrap_text(sentence(rng, true)) + "\n";
  return b;
}

inline std::string ham_plain_body(Rng& rng) {
  std::string b = wrap_text(paragraph(rng, false)) + "\n\n" +
                  wrap_text(paragraph(rng, false)) + "\n";
  if (rng.bernoulli(0.3)) b += "\n" + wrap_text(paragraph(rng, false)) + "\n";
  if (rng.bernoulli(0.04)) {
    // the odd forwarded scrap shows up in real ham too
    b += "\nFrom: " + std::string(pick(rng, kFirstNames)) +
         "@example.org\nTo: team@example.org\n" + sentence(rng, false) + "\n";
  }
  b += "\n";
  b += rng.bernoulli(0.5) ? "Thanks,\n" : "Regards,\n";
  b += capitalize(std::string(pick(rng, kFirstNames))) + "\n";
  return b;
}

inline std::string ham_html_body(Rng& rng, std::vector<Trick>& tricks) {
  std::string b = "<html><body>\n<p>" + paragraph(rng, false) + "</p>\n";
  if (rng.bernoulli(0.6))
    b += "<p><a href=\"" + clean_url(rng) + "\">" + std::string(pick(rng, kHamWords)) +
         "</a></p>\n";
  if (rng.bernoulli(0.35)) {
    tricks.push_back(Trick::table_layout);
    b += "<table><tr><td>" + sentence(rng, false) + "</td></tr></table>\n";
  }
  if (rng.bernoulli(0.3)) {
    tricks.push_back(Trick::css_style);
    b += "<div style=\"font-family: serif\">" + sentence(rng, false) + "</div>\n";
  }
  if (rng.bernoulli(0.8)) {
    tricks.push_back(Trick::color_burst);
    b += "<font color=\"#446688\">" + sentence(rng, false) + "</font>\n";
  }
  b += "<p>" + paragraph(rng, false) + "</p>\n</body></html>\n";
  return b;
}

}  // namespace gdetail

// Deterministic synthesis of message `index` out of `spec.n`. Every random
// choice flows from a per-message stream of the corpus seed, so any single
// message can be regenerated without the rest.
inline GeneratedMessage generate_message(const GenSpec& spec, std::size_t index) {
  using namespace gdetail;
  const Label label = index < spec.spam_count() ? Label::spam : Label::ham;

  Rng rng(mix_seed(spec.seed, index));
  GeneratedMessage msg;
  char idbuf[16];
  std::snprintf(idbuf, sizeof(idbuf), "msg_%05zu", index + 1);
  msg.id = idbuf;
  msg.label = label;

  const bool spam = label == Label::spam;
  const std::string subject =
      spam ? spam_subject(rng, rng.bernoulli(0.35)) : ham_subject(rng);

  const bool html =
      spam ? rng.bernoulli(spec.p(Trick::html_body)) : rng.bernoulli(0.10);
  if (html && spam) msg.tricks.push_back(Trick::html_body);

  std::string plain, html_body;
  if (spam) {
    plain = spam_plain_body(rng, spec, msg.tricks);
    if (html) html_body = spam_html_body(rng, spec, msg.tricks);
  } else {
    plain = ham_plain_body(rng);
    if (html) html_body = ham_html_body(rng, msg.tricks);
  }

  std::string from, to;
  if (spam) {
    from = "promo" + std::to_string(rng.below(10000)) + "@" +
           std::string(pick(rng, kSpamDomains));
    to = "user" + std::to_string(rng.below(500)) + "@example.org";
  } else {
    from = std::string(pick(rng, kFirstNames)) + "@example.org";
    to = std::string(pick(rng, kFirstNames)) + "@example.org";
  }

  std::string eml;
  eml += "From: " + from + "\n";
  eml += "To: " + to + "\n";
  eml += "Subject: " + subject + "\n";
  eml += "Date: " + date_header(rng) + "\n";
  eml += "Message-ID: <" + msg.id + "." + std::to_string(rng.next() & 0xffffff) +
         "@gen.example>\n";
  eml += "MIME-Version: 1.0\n";

  const bool boost =
      spam ? rng.bernoulli(spec.p(Trick::priority_boost)) : rng.bernoulli(0.04);
  if (boost) {
    msg.tricks.push_back(Trick::priority_boost);
    eml += rng.bernoulli(0.5) ? "X-Priority: 1 (Highest)\n" : "Importance: high\n";
  } else if (rng.bernoulli(0.2)) {
    eml += "X-Priority: 3 (Normal)\n";
  }

  const bool multipart = html && rng.bernoulli(0.25);
  if (multipart) {
    const std::string boundary = "b" + std::to_string(1000000 + rng.below(9000000));
    eml += "Content-Type: multipart/alternative; boundary=\"" + boundary + "\"\n\n";
    eml += "--" + boundary + "\n";
    eml += "Content-Type: text/plain; charset=us-ascii\n\n";
    eml += plain + "\n";
    eml += "--" + boundary + "\n";
    eml += "Content-Type: text/html; charset=us-ascii\n";
    if (rng.bernoulli(0.4)) {
      eml += "Content-Transfer-Encoding: quoted-printable\n\n";
      eml += qp_encode(html_body) + "\n";
    } else {
      eml += "\n" + html_body + "\n";
    }
    eml += "--" + boundary + "--\n";
  } else {
    const std::string& body = html ? html_body : plain;
    eml += "Content-Type: " + std::string(html ? "text/html" : "text/plain") +
           "; charset=us-ascii\n";
    const std::size_t enc = rng.below(10);
    if (enc < 2) {
      eml += "Content-Transfer-Encoding: quoted-printable\n\n";
      eml += qp_encode(body);
    } else if (enc == 2) {
      eml += "Content-Transfer-Encoding: base64\n\n";
      eml += b64_encode(body);
    } else {
      eml += "Content-Transfer-Encoding: 7bit\n\n";
      eml += body;
    }
  }
  msg.eml = std::move(eml);
  return msg;
}

inline std::vector<GeneratedMessage> generate_messages(const GenSpec& spec) {
  spec.validate();
  std::vector<GeneratedMessage> out;
  out.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) out.push_back(generate_message(spec, i));
  return out;
}

// Writes <out>/spam/<id>.eml and <out>/ham/<id>.eml plus <out>/manifest.csv
// and returns the manifest rows (paths relative to <out>). Each row's label
// always matches the directory its file sits in.
inline std::vector<ManifestEntry> generate_corpus(const GenSpec& spec,
                                                  const std::filesystem::path& out_dir) {
  spec.validate();
  namespace fs = std::filesystem;
  for (const char* sub : {"spam", "ham"}) {
    std::error_code ec;
    fs::create_directories(out_dir / sub, ec);
    if (ec) throw IoFailure("cannot create " + (out_dir / sub).string());
  }

  std::vector<ManifestEntry> manifest;
  manifest.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const GeneratedMessage msg = generate_message(spec, i);
    const std::string rel = std::string(label_name(msg.label)) + "/" + msg.id + ".eml";
    std::ofstream f(out_dir / rel, std::ios::binary);
    if (!f) throw IoFailure("cannot write " + (out_dir / rel).string());
    f << msg.eml;
    if (!f) throw IoFailure("short write on " + (out_dir / rel).string());
    manifest.push_back(ManifestEntry{msg.id, rel, msg.label});
  }

  std::ofstream mf(out_dir / "manifest.csv", std::ios::binary);
  if (!mf) throw IoFailure("cannot write manifest.csv");
  mf << "id,path,label\n";
  for (const ManifestEntry& e : manifest)
    mf << e.id << ',' << e.path << ',' << label_name(e.label) << '\n';
  if (!mf) throw IoFailure("short write on manifest.csv");
  return manifest;
}

}  // namespace spamtk
