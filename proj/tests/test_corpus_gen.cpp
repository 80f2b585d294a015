// The synthetic corpus generator: determinism, labeling, parseability,
// and the visibility of each injected trick to the feature scanners.

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "spamtk/corpus_gen.hpp"
#include "spamtk/email.hpp"
#include "spamtk/features.hpp"
#include "testutil.hpp"

using spamtk::GenSpec;
using spamtk::Label;
using spamtk::Trick;

TEST_CASE("generation is deterministic and reproducible per message") {
  GenSpec spec;
  spec.n = 60;
  spec.seed = 41;

  const auto a = spamtk::generate_messages(spec);
  const auto b = spamtk::generate_messages(spec);
  REQUIRE(a.size() == 60);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].label == b[i].label);
    CHECK(a[i].eml == b[i].eml);
    CHECK(a[i].tricks == b[i].tricks);

    // any single message regenerates independently of the batch
    const spamtk::GeneratedMessage solo = spamtk::generate_message(spec, i);
    CHECK(solo.eml == a[i].eml);
  }

  GenSpec other = spec;
  other.seed = 42;
  CHECK(spamtk::generate_messages(other)[0].eml != a[0].eml);
}

TEST_CASE("the class split honors the requested ratio") {
  CHECK(GenSpec{.n = 1000, .spam_ratio = 0.5}.spam_count() == 500);
  CHECK(GenSpec{.n = 10, .spam_ratio = 0.25}.spam_count() == 3);  // 2.5 rounds up
  CHECK(GenSpec{.n = 10, .spam_ratio = 0.24}.spam_count() == 2);
  CHECK(GenSpec{.n = 3, .spam_ratio = 0.5}.spam_count() == 2);

  GenSpec spec;
  spec.n = 50;
  spec.spam_ratio = 0.3;
  spec.seed = 5;
  const auto msgs = spamtk::generate_messages(spec);
  std::size_t spam = 0;
  for (const auto& m : msgs)
    if (m.label == Label::spam) ++spam;
  CHECK(spam == 15);
  // spam occupies the leading indices, ids are 1-based and zero-padded
  CHECK(msgs[0].label == Label::spam);
  CHECK(msgs[0].id == "msg_00001");
  CHECK(msgs[14].label == Label::spam);
  CHECK(msgs[15].label == Label::ham);
  CHECK(msgs[49].id == "msg_00050");
}

TEST_CASE("spec validation rejects nonsense") {
  CHECK_THROWS_AS(GenSpec{.n = 1}.validate(), spamtk::Error);
  CHECK_THROWS_AS((GenSpec{.n = 10, .spam_ratio = 0.0}).validate(), spamtk::Error);
  CHECK_THROWS_AS((GenSpec{.n = 10, .spam_ratio = 1.0}).validate(), spamtk::Error);

  GenSpec bad;
  bad.trick_mix[Trick::comment_split] = 1.5;
  CHECK_THROWS_AS(bad.validate(), spamtk::Error);
  GenSpec neg;
  neg.trick_mix[Trick::script_use] = -0.1;
  CHECK_THROWS_AS(neg.validate(), spamtk::Error);

  CHECK_NOTHROW(GenSpec{}.validate());
}

TEST_CASE("every generated message parses cleanly") {
  GenSpec spec;
  spec.n = 300;
  spec.seed = 9;
  const auto msgs = spamtk::generate_messages(spec);

  for (const auto& m : msgs) {
    INFO(m.id);
    spamtk::EmailMessage parsed;
    REQUIRE_NOTHROW(parsed = spamtk::parse_eml(m.eml));
    CHECK_FALSE(parsed.subject.empty());
    CHECK(spamtk::header_value(parsed, "From").has_value());
    CHECK(spamtk::header_value(parsed, "To").has_value());
    CHECK(spamtk::header_value(parsed, "Message-ID").has_value());
    CHECK_FALSE(parsed.raw_body.empty());

    const spamtk::FeatureVector v = spamtk::extract(parsed);
    for (std::size_t i = 0; i < spamtk::kFeatureCount; ++i) {
      CHECK(std::isfinite(v.values[i]));
      CHECK(v.values[i] >= 0.0);
    }
  }
}

TEST_CASE("injected tricks are visible to the feature scanners") {
  GenSpec spec;
  spec.n = 240;
  spec.seed = 31;
  const auto msgs = spamtk::generate_messages(spec);

  // tricks recorded while composing a body that ends up discarded (the
  // plain alternative of a non-multipart HTML message) cannot be checked
  // per message, so the per-message implications cover the rest
  std::map<Trick, std::size_t> seen;
  for (const auto& m : msgs) {
    const spamtk::FeatureVector v =
        spamtk::extract(spamtk::parse_eml(m.eml));
    const std::set<Trick> tricks(m.tricks.begin(), m.tricks.end());
    for (Trick t : tricks) ++seen[t];

    INFO(m.id);
    if (tricks.count(Trick::priority_boost)) CHECK(v.values[6] == 1.0);
    if (tricks.count(Trick::html_body)) CHECK(v.values[7] == 1.0);
    if (tricks.count(Trick::comment_split)) CHECK(v.values[12] >= 2.0);
    if (tricks.count(Trick::noisy_links)) {
      CHECK(v.values[13] >= 2.0);
      CHECK(v.values[16] >= 2.0);
    }
    if (tricks.count(Trick::invisible_ink)) CHECK(v.values[15] == 1.0);
    if (tricks.count(Trick::clickable_image)) CHECK(v.values[14] >= 1.0);
    if (tricks.count(Trick::script_use)) CHECK(v.values[18] == 1.0);
    if (tricks.count(Trick::css_style)) CHECK(v.values[19] == 1.0);
    if (tricks.count(Trick::table_layout)) CHECK(v.values[20] == 1.0);
    if (tricks.count(Trick::color_burst)) CHECK(v.values[17] >= 1.0);
  }

  // with 120 spam messages every trick should have fired at least once
  for (Trick t : {Trick::comment_split, Trick::invisible_ink, Trick::html_numbers,
                  Trick::priority_boost, Trick::html_body, Trick::noisy_links,
                  Trick::color_burst, Trick::script_use, Trick::table_layout,
                  Trick::fake_text, Trick::clickable_image, Trick::css_style,
                  Trick::from_to_literal}) {
    CHECK(seen[t] >= 1);
  }
}

TEST_CASE("spam and ham separate on the trick-bearing features") {
  GenSpec spec;
  spec.n = 400;
  spec.seed = 77;
  const auto msgs = spamtk::generate_messages(spec);

  std::array<double, spamtk::kFeatureCount> spam_mean{}, ham_mean{};
  std::size_t n_spam = 0, n_ham = 0;
  for (const auto& m : msgs) {
    const spamtk::FeatureVector v = spamtk::extract(spamtk::parse_eml(m.eml));
    auto& acc = m.label == Label::spam ? spam_mean : ham_mean;
    (m.label == Label::spam ? n_spam : n_ham) += 1;
    for (std::size_t i = 0; i < v.values.size(); ++i) acc[i] += v.values[i];
  }
  for (std::size_t i = 0; i < spamtk::kFeatureCount; ++i) {
    spam_mean[i] /= static_cast<double>(n_spam);
    ham_mean[i] /= static_cast<double>(n_ham);
  }

  // every body/header channel the spam tricks feed should sit clearly
  // above its ham baseline
  for (std::size_t i : {6, 7, 12, 13, 14, 15, 16, 18, 20}) {
    INFO("feature index " << i);
    CHECK(spam_mean[i] > ham_mean[i] + 0.1);
  }
  // ham color noise exists but spam still uses color more
  CHECK(spam_mean[17] > ham_mean[17]);
}

TEST_CASE("corpus files land in labeled directories with a manifest") {
  namespace fs = std::filesystem;
  testutil::TempDir tmp;
  GenSpec spec;
  spec.n = 40;
  spec.seed = 3;

  const auto manifest = spamtk::generate_corpus(spec, tmp.path());
  REQUIRE(manifest.size() == 40);

  std::size_t spam_files = 0, ham_files = 0;
  for (const auto& e : fs::directory_iterator(tmp.path() / "spam")) {
    (void)e;
    ++spam_files;
  }
  for (const auto& e : fs::directory_iterator(tmp.path() / "ham")) {
    (void)e;
    ++ham_files;
  }
  CHECK(spam_files == 20);
  CHECK(ham_files == 20);

  for (const auto& e : manifest) {
    INFO(e.id);
    REQUIRE(fs::exists(tmp.path() / e.path));
    const std::string dir = e.path.substr(0, e.path.find('/'));
    CHECK(dir == spamtk::label_name(e.label));
    // file bytes match an independent regeneration of the same index
  }
  const std::string first = testutil::read_file(tmp.path() / manifest[0].path);
  CHECK(first == spamtk::generate_message(spec, 0).eml);

  const std::string mcsv = testutil::read_file(tmp.path() / "manifest.csv");
  CHECK(mcsv.rfind("id,path,label\n", 0) == 0);
  CHECK(std::count(mcsv.begin(), mcsv.end(), '\n') == 41);
  CHECK(mcsv.find("msg_00001,spam/msg_00001.eml,spam\n") != std::string::npos);
  CHECK(mcsv.find("msg_00040,ham/msg_00040.eml,ham\n") != std::string::npos);

  // a second run into a fresh directory is byte-identical
  testutil::TempDir tmp2;
  spamtk::generate_corpus(spec, tmp2.path());
  CHECK(testutil::read_file(tmp2.path() / "manifest.csv") == mcsv);
  for (const auto& e : manifest) {
    CHECK(testutil::read_file(tmp2.path() / e.path) ==
          testutil::read_file(tmp.path() / e.path));
  }
}
