#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "simtext/error.hpp"
#include "simtext/textmetrics.hpp"
#include "testutil.hpp"

using namespace simtext;
using metrics::AnalyticScaling;
using metrics::ScoreCard;
using metrics::TokenStream;

namespace {

lexicon::Lexicon demo_lexicon() {
  std::istringstream in(
      "%category articles\na\nan\nthe\n"
      "%category prepositions\nto\nof\nin\n"
      "%category pronouns\nwe\nit\nthis\n"
      "%category auxiliary_verbs\nis\nare\nbe\n"
      "%category adverbs\nvery\nquickly\n"
      "%category conjunctions\nand\nbut\n"
      "%category negations\nnot\nno\n"
      "%category impersonal_pronouns\nthis\nthat\n"
      "%category positive_tone\nimprove*\ngood\n");
  return lexicon::Lexicon::parse(in, "demo");
}

lexicon::CommonWordList demo_common() {
  std::istringstream in(
      "%category everyday\nthis\nto\nsociety\nthe\nand\nis\n");
  return lexicon::CommonWordList::parse(in, "demo");
}

}  // namespace

TEST_CASE("tokenize counts words and sentences") {
  TokenStream ts = metrics::tokenize("This science aims to improve society");
  CHECK(ts.word_count() == 6);
  CHECK(ts.sentence_count == 1);
  CHECK(ts.words[0] == "this");
  CHECK(ts.words[5] == "society");

  TokenStream two = metrics::tokenize("Hi. Bye.");
  CHECK(two.word_count() == 2);
  CHECK(two.sentence_count == 2);
}

TEST_CASE("abbreviations do not split sentences") {
  TokenStream ts = metrics::tokenize("Results (e.g., Table 2) held. Done.");
  CHECK(ts.sentence_count == 2);
  TokenStream al = metrics::tokenize("See Smith et al. The effect was real.");
  CHECK(al.sentence_count == 1);
  TokenStream dr = metrics::tokenize("Dr. Smith agreed. So did we.");
  CHECK(dr.sentence_count == 2);
}

TEST_CASE("sentence boundary needs following capital or end") {
  CHECK(metrics::tokenize("pH of 7.2 was stable").sentence_count == 1);
  CHECK(metrics::tokenize("It worked. but only once").sentence_count == 1);
  CHECK(metrics::tokenize("It worked! Twice even?").sentence_count == 2);
  CHECK(metrics::tokenize("One... Two... Three...").sentence_count == 3);
}

TEST_CASE("digit runs are not words") {
  TokenStream ts = metrics::tokenize("Table 2 lists 34584 rows");
  CHECK(ts.word_count() == 3);  // table, lists, rows
}

TEST_CASE("apostrophes and hyphens stay inside words") {
  TokenStream ts = metrics::tokenize("We don't use state-of-the-art tools");
  REQUIRE(ts.word_count() == 5);
  CHECK(ts.words[1] == "don't");
  CHECK(ts.words[3] == "state-of-the-art");
  // curly apostrophe normalized to ASCII
  TokenStream curly = metrics::tokenize("It doesn\xe2\x80\x99t work");
  REQUIRE(curly.word_count() == 3);
  CHECK(curly.words[1] == "doesn't");
  // leading/trailing punctuation never joins
  TokenStream quoted = metrics::tokenize("'quoted' words -dash");
  CHECK(quoted.word_count() == 3);
}

TEST_CASE("tokenize rejects blank text") {
  CHECK_THROWS_AS(metrics::tokenize(""), AnalysisError);
  CHECK_THROWS_AS(metrics::tokenize("   \n\t"), AnalysisError);
}

TEST_CASE("syllable heuristic") {
  CHECK(metrics::count_syllables("job") == 1);
  CHECK(metrics::count_syllables("occupation") == 4);
  CHECK(metrics::count_syllables("a") == 1);
  CHECK(metrics::count_syllables("make") == 1);
  CHECK(metrics::count_syllables("the") == 1);
  CHECK(metrics::count_syllables("science") == 1);  // heuristic silent-e miss
  CHECK(metrics::count_syllables("society") == 3);
  CHECK(metrics::count_syllables("free") == 1);
  CHECK(metrics::count_syllables("office") == 2);
  CHECK(metrics::count_syllables("rhythm") == 1);
  CHECK(metrics::count_syllables("improve") == 2);
}

TEST_CASE("flesch formula") {
  TokenStream three;
  three.words = {"x", "y", "z"};
  three.syllables = {1, 1, 1};
  three.sentence_count = 1;
  CHECK(metrics::flesch_reading_ease(three) ==
        doctest::Approx(119.19).epsilon(1e-12));

  TokenStream longer;
  longer.words.assign(20, "w");
  longer.syllables.assign(20, 1);
  for (int i = 0; i < 10; ++i) longer.syllables[i] = 2;  // 30/20 = 1.5
  longer.sentence_count = 1;
  CHECK(metrics::flesch_reading_ease(longer) ==
        doctest::Approx(59.635).epsilon(1e-12));

  TokenStream empty;
  CHECK_THROWS_AS(metrics::flesch_reading_ease(empty), AnalysisError);
}

TEST_CASE("flesch decreases with longer sentences and words") {
  TokenStream base;
  base.words.assign(10, "w");
  base.syllables.assign(10, 1);
  base.sentence_count = 2;
  double b = metrics::flesch_reading_ease(base);
  TokenStream merged = base;
  merged.sentence_count = 1;
  CHECK(metrics::flesch_reading_ease(merged) < b);
  TokenStream heavier = base;
  heavier.syllables.assign(10, 2);
  CHECK(metrics::flesch_reading_ease(heavier) < b);
}

TEST_CASE("category percentages") {
  auto lex = demo_lexicon();
  TokenStream ts = metrics::tokenize("This science aims to improve society");
  auto pct = metrics::category_percentages(ts, lex);
  CHECK(pct.at("impersonal_pronouns") == doctest::Approx(100.0 / 6));
  CHECK(pct.at("positive_tone") == doctest::Approx(100.0 / 6));
  CHECK(pct.at("articles") == 0.0);
  CHECK(pct.at("prepositions") == doctest::Approx(100.0 / 6));
}

TEST_CASE("common words percentage") {
  auto common = demo_common();
  TokenStream ts = metrics::tokenize("This science aims to improve society");
  // this, to, society are listed: 3/6
  CHECK(metrics::common_words_pct(ts, common) == doctest::Approx(50.0));
}

TEST_CASE("analytic composite") {
  std::map<std::string, double> cats{
      {"articles", 10.0},       {"prepositions", 15.0}, {"pronouns", 5.0},
      {"auxiliary_verbs", 5.0}, {"adverbs", 5.0},       {"conjunctions", 5.0},
      {"negations", 0.0}};
  auto score = metrics::analytic_writing(cats);
  CHECK(score.raw == doctest::Approx(5.0).epsilon(1e-12));
  // default scaling: mu0=0 sigma0=20
  CHECK(score.scaled > 50.0);
  CHECK(score.scaled < 100.0);

  std::map<std::string, double> zeros{
      {"articles", 0.0},        {"prepositions", 0.0}, {"pronouns", 0.0},
      {"auxiliary_verbs", 0.0}, {"adverbs", 0.0},      {"conjunctions", 0.0},
      {"negations", 0.0}};
  auto z = metrics::analytic_writing(zeros);
  CHECK(z.raw == 0.0);
  CHECK(z.scaled == doctest::Approx(50.0).epsilon(1e-12));

  AnalyticScaling shifted{5.0, 10.0};
  auto at_mu = metrics::analytic_writing(cats, shifted);
  CHECK(at_mu.scaled == doctest::Approx(50.0).epsilon(1e-12));

  std::map<std::string, double> missing = cats;
  missing.erase("negations");
  CHECK_THROWS_AS(metrics::analytic_writing(missing), AnalysisError);
}

TEST_CASE("simplicity index standardization") {
  std::vector<ScoreCard> cards(6);
  double commons[6] = {60, 70, 80, 55, 65, 75};
  double flesch[6] = {30, 50, 70, 20, 40, 60};
  double analytic[6] = {90, 80, 70, 95, 85, 75};
  for (int i = 0; i < 6; ++i) {
    cards[i].id = "d" + std::to_string(i);
    cards[i].common_pct = commons[i];
    cards[i].flesch = flesch[i];
    cards[i].analytic_scaled = analytic[i];
  }
  metrics::simplicity_index(cards);
  double mean = 0.0;
  for (const auto& c : cards) mean += c.simplicity_z;
  mean /= 6.0;
  CHECK(std::fabs(mean) < 1e-12);
  // doc 2 is simplest on every component
  auto best = std::max_element(cards.begin(), cards.end(),
                               [](const ScoreCard& a, const ScoreCard& b) {
                                 return a.simplicity_z < b.simplicity_z;
                               });
  CHECK(best->id == "d2");

  // affine transforms of a raw component leave the index unchanged
  std::vector<ScoreCard> scaled = cards;
  for (auto& c : scaled) c.flesch = 3.5 * c.flesch + 11.0;
  metrics::simplicity_index(scaled);
  for (int i = 0; i < 6; ++i) {
    CHECK(std::fabs(scaled[i].simplicity_z - cards[i].simplicity_z) < 1e-9);
  }

  std::vector<ScoreCard> tiny(1);
  CHECK_THROWS_AS(metrics::simplicity_index(tiny), AnalysisError);
  std::vector<ScoreCard> flat = cards;
  for (auto& c : flat) c.common_pct = 50.0;
  CHECK_THROWS_AS(metrics::simplicity_index(flat), AnalysisError);
}

TEST_CASE("score document end to end") {
  auto lex = demo_lexicon();
  auto common = demo_common();
  corpus::Document doc{"d1", corpus::Kind::abstract,
                       "This science aims to improve society"};
  ScoreCard card = metrics::score_document(doc, lex, common);
  CHECK(card.id == "d1");
  CHECK(card.word_count == 6);
  CHECK(card.common_pct == doctest::Approx(50.0));
  CHECK(card.categories.at("positive_tone") == doctest::Approx(100.0 / 6));
  CHECK_FALSE(card.has_simplicity);
}

TEST_CASE("parallel scoring matches serial") {
  auto lex = demo_lexicon();
  auto common = demo_common();
  corpus::Corpus c;
  for (int i = 0; i < 40; ++i) {
    c.add(corpus::Document{
        "d" + std::to_string(i), corpus::Kind::abstract,
        "Sentence number " + std::to_string(i) +
            " talks about science and the society we improve."});
  }
  auto serial = metrics::score_corpus(c, lex, common, {}, 1);
  auto parallel = metrics::score_corpus(c, lex, common, {}, 4);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].id == parallel[i].id);
    CHECK(serial[i].common_pct == parallel[i].common_pct);
    CHECK(serial[i].flesch == parallel[i].flesch);
  }
}

TEST_CASE("scorecard csv and jsonl round trip") {
  auto lex = demo_lexicon();
  auto common = demo_common();
  corpus::Corpus c;
  c.add(corpus::Document{"a", corpus::Kind::abstract,
                         "The quick study, with notes."});
  c.add(corpus::Document{"a", corpus::Kind::human_lay,
                         "We did a quick study."});
  auto cards = metrics::score_corpus(c, lex, common);
  metrics::simplicity_index(cards);
  TempDir tmp;
  auto csv_path = tmp.file("scores.csv");
  metrics::write_scorecards_csv(csv_path, cards);
  auto back = metrics::read_scorecards_csv(csv_path);
  REQUIRE(back.size() == cards.size());
  for (std::size_t i = 0; i < cards.size(); ++i) {
    CHECK(back[i].id == cards[i].id);
    CHECK(back[i].kind == cards[i].kind);
    CHECK(back[i].word_count == cards[i].word_count);
    CHECK(back[i].common_pct == cards[i].common_pct);
    CHECK(back[i].analytic_raw == cards[i].analytic_raw);
    CHECK(back[i].analytic_scaled == cards[i].analytic_scaled);
    CHECK(back[i].flesch == cards[i].flesch);
    CHECK(back[i].simplicity_z == cards[i].simplicity_z);
  }
  auto jsonl_path = tmp.file("scores.jsonl");
  metrics::write_scorecards_jsonl(jsonl_path, cards);
  std::string text = read_file(jsonl_path);
  CHECK(text.find("\"id\":\"a\"") != std::string::npos);
  CHECK(text.find("\"common_pct\"") != std::string::npos);
  // byte-identical rewrites
  auto csv2 = tmp.file("scores2.csv");
  metrics::write_scorecards_csv(csv2, cards);
  CHECK(read_file(csv_path) == read_file(csv2));
}
