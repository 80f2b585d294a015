#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "spamtk/tokenizer.hpp"

#include "oracles.hpp"

using spamtk::alphabetic_words;
using spamtk::strip_html;
using spamtk::tokenize;

TEST_CASE("tokenize splits on whitespace runs") {
  const std::string text = "  hello\tworld\n\nfoo \r bar\f\vbaz  ";
  const auto ts = tokenize(text);
  REQUIRE(ts.tokens == std::vector<std::string>{"hello", "world", "foo", "bar", "baz"});
  CHECK(ts.source_length == text.size());

  CHECK(tokenize("").tokens.empty());
  CHECK(tokenize(" \t\n\r\f\v").tokens.empty());
  CHECK(tokenize("one").tokens == std::vector<std::string>{"one"});
}

TEST_CASE("tokenize keeps punctuation inside tokens") {
  const auto ts = tokenize("v1agra!!! $$$win (free)");
  REQUIRE(ts.tokens == std::vector<std::string>{"v1agra!!!", "$$$win", "(free)"});
}

TEST_CASE("tokenize matches stream extraction on assorted text") {
  const std::vector<std::string> samples = {
      "",
      "plain words only",
      "  leading and trailing  ",
      "tabs\tand\nnewlines\r\nmixed",
      "a\fb\vc",
      "!@#$ %^&* ()",
  };
  for (const std::string& s : samples) {
    CAPTURE(s);
    CHECK(tokenize(s).tokens == oracle::tokens(s));
  }
}

TEST_CASE("alphabetic words are letters and apostrophes with a letter") {
  const auto words = alphabetic_words(tokenize("don't stop 123 a1 x-ray O'Neill ''' ''a"));
  REQUIRE(words == std::vector<std::string>{"don't", "stop", "O'Neill", "''a"});
}

TEST_CASE("strip_html removes tags but keeps loose angle brackets") {
  CHECK(strip_html("no markup here") == "no markup here");
  CHECK(strip_html("<b>bold</b> text") == "bold text");
  CHECK(strip_html("a < b and x <3 y") == "a < b and x <3 y");
  CHECK(strip_html("end < ") == "end < ");
  CHECK(strip_html("<em") == "");                    // unterminated tag
  CHECK(strip_html("1 <? pi ?> 2 <!doctype html> 3") == "1  2  3");
  CHECK(strip_html("x</closing>y") == "xy");
}

TEST_CASE("strip_html drops comments first") {
  CHECK(strip_html("pre<!-- hidden -->post") == "prepost");
  CHECK(strip_html("pre<!-- no end") == "pre");
  CHECK(strip_html("a<!----> b") == "a b");
  CHECK(strip_html("G<!-- x -->E<!-- y -->T") == "GET");
}

TEST_CASE("strip_html drops script and style elements with their contents") {
  CHECK(strip_html("<script>var x=1;</script>after") == "after");
  CHECK(strip_html("<SCRIPT>x</ScRiPt>after") == "after");
  CHECK(strip_html("<style>p{color:red}</style>tail") == "tail");
  CHECK(strip_html("<script src='x.js'>y</script>z") == "z");
  CHECK(strip_html("<script>no closer") == "");
  CHECK(strip_html("<script>x</script") == "");      // closer misses its '>'
  // the element name is the maximal letter run after '<'
  CHECK(strip_html("<script2>x</script>after") == "after");
  CHECK(strip_html("<scriptx>y</scriptx>z") == "yz");
  CHECK(strip_html("<stylesheet>a</stylesheet>b") == "ab");
}

TEST_CASE("strip_html decodes entities after tag removal") {
  CHECK(strip_html("a&amp;b") == "a&b");
  CHECK(strip_html("&lt;tag&gt;") == "<tag>");
  CHECK(strip_html("&quot;q&quot; &apos;a&apos; x&nbsp;y") == "\"q\" 'a' x y");
  CHECK(strip_html("&#65;&#x42;&#x63;") == "ABc");
  CHECK(strip_html("&bogus; stays") == "&bogus; stays");
  CHECK(strip_html("&thisnameislong;") == "&thisnameislong;");
  CHECK(strip_html("&amp") == "&amp");
  CHECK(strip_html("&;") == "&;");
  CHECK(strip_html("&#;") == "&#;");
  CHECK(strip_html("&#x;") == "&#x;");
  CHECK(strip_html("&#xD800;") == "\xEF\xBF\xBD");   // surrogate -> replacement
  CHECK(strip_html("&#1114112;") == "\xEF\xBF\xBD"); // beyond U+10FFFF
  CHECK(strip_html("&#128077;") == "\xF0\x9F\x91\x8D");
  // a decoded '<' cannot re-open a tag
  CHECK(strip_html("&lt;b&gt;text&lt;/b&gt;") == "<b>text</b>");
}

TEST_CASE("strip_html single pass pins for crossing constructs") {
  // a comment opener inside script content is never seen as a comment
  CHECK(strip_html("<script>x<!-- </script> -->tail") == " -->tail");
  // a comment inside a tag does not hide the tag's closing '>'
  CHECK(strip_html("<font <!-- x --> color=red>hello") == " color=red>hello");
  // comment swallows markup inside it
  CHECK(strip_html("a<!-- <b>bold</b> -->z") == "az");
}

TEST_CASE("strip_html agrees with the staged reference on plain constructs") {
  const std::vector<std::string> samples = {
      "",
      "just words, no markup at all",
      "<p>one</p><p>two</p>",
      "text with 3 < 4 and 5 > 2 comparisons",
      "<a href=\"http://x.com\">link</a> trailing",
      "pre<!-- one --> mid <!-- two -->post",
      "<script>if (a<b) foo();</script>visible",
      "<style>.c{font-size:2em}</style>shown",
      "<div class='x'>nested <span>inner</span> done</div>",
      "ends with unterminated <span class=",
      "&amp;&lt;&gt;&#33;&#x21;&nbsp;",
      "<B>CAPS</B> and <i>italics</i>",
      "<td>cell</td> <br/> after",
      "<img src='pic.png'> standalone",
      "one<!---->two",
      "<script>alert('hi')</script><style>b{}</style>rest",
  };
  for (const std::string& s : samples) {
    CAPTURE(s);
    CHECK(strip_html(s) == oracle::strip_tags(s));
  }
}
