#pragma once

#include <map>
#include <string>
#include <vector>

#include "simtext/corpus.hpp"
#include "simtext/lexicon.hpp"

namespace simtext::metrics {

struct TokenStream {
  std::vector<std::string> words;  // lowercase, apostrophes normalized
  std::vector<int> syllables;      // parallel to words, each >= 1
  int sentence_count = 1;

  int word_count() const { return static_cast<int>(words.size()); }
  int syllable_total() const;
};

// Words are maximal letter runs with internal apostrophes and hyphens,
// lowercased; digit runs are not words. Sentences end at . ! ? followed by
// whitespace and a capital (or end of text), with an abbreviation stoplist.
TokenStream tokenize(const std::string& text);

// Vowel-group heuristic with silent-e subtraction, floored at 1.
int count_syllables(const std::string& word);

// 206.835 - 1.015 (words/sentence) - 84.6 (syllables/word); unclamped.
double flesch_reading_ease(const TokenStream& stream);

std::map<std::string, double> category_percentages(
    const TokenStream& stream, const lexicon::Lexicon& lex);

double common_words_pct(const TokenStream& stream,
                        const lexicon::CommonWordList& list);

// Calibration for mapping the raw analytic composite onto [0, 100] with a
// normal CDF. The defaults are arbitrary; every comparison in the toolkit is
// invariant to this monotone choice.
struct AnalyticScaling {
  double mu0 = 0.0;
  double sigma0 = 20.0;
};

struct AnalyticScore {
  double raw = 0.0;     // percentage points, may be negative
  double scaled = 0.0;  // in [0, 100]
};

// articles + prepositions - pronouns - auxiliary_verbs - adverbs -
// conjunctions - negations, then scaled = 100 Phi((raw - mu0)/sigma0).
AnalyticScore analytic_writing(const std::map<std::string, double>& categories,
                               const AnalyticScaling& scaling = {});

struct ScoreCard {
  std::string id;
  corpus::Kind kind = corpus::Kind::abstract;
  int word_count = 0;
  double common_pct = 0.0;
  double analytic_raw = 0.0;
  double analytic_scaled = 0.0;
  double flesch = 0.0;
  double simplicity_z = 0.0;
  bool has_simplicity = false;  // set once standardized over a population
  std::map<std::string, double> categories;
};

ScoreCard score_document(const corpus::Document& doc,
                         const lexicon::Lexicon& lex,
                         const lexicon::CommonWordList& common,
                         const AnalyticScaling& scaling = {});

// Scores every document; word_count caches are filled in. jobs > 1 scores in
// parallel with output order independent of scheduling.
std::vector<ScoreCard> score_corpus(const corpus::Corpus& corpus,
                                    const lexicon::Lexicon& lex,
                                    const lexicon::CommonWordList& common,
                                    const AnalyticScaling& scaling = {},
                                    int jobs = 1);

// Pools all cards, z-scores the three components (sample sd), and fills
// simplicity_z = z(common) + z(flesch) - z(analytic_scaled).
void simplicity_index(std::vector<ScoreCard>& cards);

void write_scorecards_csv(const std::string& path,
                          const std::vector<ScoreCard>& cards);
void write_scorecards_jsonl(const std::string& path,
                            const std::vector<ScoreCard>& cards);
std::vector<ScoreCard> read_scorecards_csv(const std::string& path);

}  // namespace simtext::metrics
