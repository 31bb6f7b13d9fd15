#include "simtext/textmetrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "json.hpp"
#include "simtext/csv.hpp"
#include "simtext/distributions.hpp"
#include "simtext/error.hpp"
#include "simtext/format.hpp"

namespace simtext::metrics {

namespace {

bool is_letter(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_blank(const std::string& s) {
  for (unsigned char c : s) {
    if (!is_space(c)) return false;
  }
  return true;
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

const std::set<std::string>& abbreviations() {
  static const std::set<std::string> kAbbrev{
      "e.g.", "i.e.", "al.",   "dr.",  "mr.",  "mrs.", "ms.",
      "prof.", "fig.", "figs.", "vs.",  "cf.",  "etc.", "ref.",
      "refs.", "eq.",  "eqs.",  "no.",  "vol.", "st."};
  return kAbbrev;
}

// Length of the apostrophe at position i: 1 for ASCII ', 3 for U+2019.
std::size_t apostrophe_len(const std::string& text, std::size_t i) {
  if (text[i] == '\'') return 1;
  if (i + 2 < text.size() &&
      static_cast<unsigned char>(text[i]) == 0xe2 &&
      static_cast<unsigned char>(text[i + 1]) == 0x80 &&
      static_cast<unsigned char>(text[i + 2]) == 0x99) {
    return 3;
  }
  return 0;
}

}  // namespace

int TokenStream::syllable_total() const {
  int total = 0;
  for (int s : syllables) total += s;
  return total;
}

int count_syllables(const std::string& word) {
  int groups = 0;
  bool in_group = false;
  for (char c : word) {
    if (is_vowel(c)) {
      if (!in_group) {
        ++groups;
        in_group = true;
      }
    } else {
      in_group = false;
    }
  }
  if (word.size() >= 2 && word.back() == 'e') {
    char prev = word[word.size() - 2];
    if (is_letter(static_cast<unsigned char>(prev)) && !is_vowel(prev) &&
        groups > 1) {
      --groups;
    }
  }
  return groups < 1 ? 1 : groups;
}

TokenStream tokenize(const std::string& text) {
  if (is_blank(text)) {
    throw AnalysisError("tokenize: text is empty or whitespace-only");
  }
  TokenStream ts;
  std::size_t n = text.size();
  std::size_t i = 0;
  int sentences = 0;
  bool segment_has_word = false;
  while (i < n) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (is_letter(c)) {
      std::string word;
      word.push_back(static_cast<char>(std::tolower(c)));
      ++i;
      while (i < n) {
        unsigned char c2 = static_cast<unsigned char>(text[i]);
        if (is_letter(c2)) {
          word.push_back(static_cast<char>(std::tolower(c2)));
          ++i;
          continue;
        }
        std::size_t ap = apostrophe_len(text, i);
        if (ap > 0 && i + ap < n &&
            is_letter(static_cast<unsigned char>(text[i + ap]))) {
          word.push_back('\'');
          i += ap;
          continue;
        }
        if (c2 == '-' && i + 1 < n &&
            is_letter(static_cast<unsigned char>(text[i + 1]))) {
          word.push_back('-');
          ++i;
          continue;
        }
        break;
      }
      ts.words.push_back(std::move(word));
      segment_has_word = true;
      continue;
    }
    if (c == '.' || c == '!' || c == '?') {
      std::size_t run_start = i;
      std::size_t j = i;
      while (j < n && (text[j] == '.' || text[j] == '!' || text[j] == '?')) {
        ++j;
      }
      bool boundary = false;
      if (j >= n) {
        boundary = true;
      } else if (is_space(static_cast<unsigned char>(text[j]))) {
        std::size_t k = j;
        while (k < n && is_space(static_cast<unsigned char>(text[k]))) ++k;
        if (k < n && text[k] >= 'A' && text[k] <= 'Z') boundary = true;
      }
      if (boundary && j - run_start == 1 && text[run_start] == '.') {
        std::size_t b = run_start;
        while (b > 0 && !is_space(static_cast<unsigned char>(text[b - 1]))) {
          --b;
        }
        // drop leading brackets/quotes so "(e.g." still matches the list
        while (b < run_start &&
               !is_letter(static_cast<unsigned char>(text[b]))) {
          ++b;
        }
        std::string candidate = text.substr(b, run_start - b + 1);
        for (char& ch : candidate) {
          ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        }
        if (abbreviations().count(candidate)) boundary = false;
      }
      if (boundary && segment_has_word) {
        ++sentences;
        segment_has_word = false;
      }
      i = j;
      continue;
    }
    ++i;
  }
  if (segment_has_word) ++sentences;
  ts.sentence_count = sentences < 1 ? 1 : sentences;
  ts.syllables.reserve(ts.words.size());
  for (const auto& w : ts.words) ts.syllables.push_back(count_syllables(w));
  return ts;
}

double flesch_reading_ease(const TokenStream& stream) {
  if (stream.word_count() == 0) {
    throw AnalysisError("flesch_reading_ease: stream has no words");
  }
  double words = stream.word_count();
  double sentences = stream.sentence_count;
  double syllables = stream.syllable_total();
  return 206.835 - 1.015 * (words / sentences) - 84.6 * (syllables / words);
}

std::map<std::string, double> category_percentages(
    const TokenStream& stream, const lexicon::Lexicon& lex) {
  if (stream.word_count() == 0) {
    throw AnalysisError("category_percentages: stream has no words");
  }
  std::map<std::string, double> out;
  double total = stream.word_count();
  for (const auto& cat : lex.categories()) {
    int matched = 0;
    for (const auto& w : stream.words) {
      if (lex.matches(cat, w)) ++matched;
    }
    out[cat.name] = 100.0 * matched / total;
  }
  return out;
}

double common_words_pct(const TokenStream& stream,
                        const lexicon::CommonWordList& list) {
  if (stream.word_count() == 0) {
    throw AnalysisError("common_words_pct: stream has no words");
  }
  int matched = 0;
  for (const auto& w : stream.words) {
    if (list.contains(w)) ++matched;
  }
  return 100.0 * matched / stream.word_count();
}

AnalyticScore analytic_writing(const std::map<std::string, double>& categories,
                               const AnalyticScaling& scaling) {
  for (const char* name : lexicon::kStyleCategories) {
    if (!categories.count(name)) {
      throw AnalysisError(std::string("analytic_writing: missing style "
                                      "category: ") +
                          name);
    }
  }
  AnalyticScore score;
  score.raw = categories.at("articles") + categories.at("prepositions") -
              categories.at("pronouns") - categories.at("auxiliary_verbs") -
              categories.at("adverbs") - categories.at("conjunctions") -
              categories.at("negations");
  if (!(scaling.sigma0 > 0.0)) {
    throw AnalysisError("analytic_writing: sigma0 must be positive");
  }
  score.scaled =
      100.0 * stats::norm_cdf((score.raw - scaling.mu0) / scaling.sigma0);
  return score;
}

ScoreCard score_document(const corpus::Document& doc,
                         const lexicon::Lexicon& lex,
                         const lexicon::CommonWordList& common,
                         const AnalyticScaling& scaling) {
  TokenStream stream = tokenize(doc.text);
  ScoreCard card;
  card.id = doc.id;
  card.kind = doc.kind;
  card.word_count = stream.word_count();
  card.categories = category_percentages(stream, lex);
  card.common_pct = common_words_pct(stream, common);
  AnalyticScore analytic = analytic_writing(card.categories, scaling);
  card.analytic_raw = analytic.raw;
  card.analytic_scaled = analytic.scaled;
  card.flesch = flesch_reading_ease(stream);
  return card;
}

std::vector<ScoreCard> score_corpus(const corpus::Corpus& corpus,
                                    const lexicon::Lexicon& lex,
                                    const lexicon::CommonWordList& common,
                                    const AnalyticScaling& scaling, int jobs) {
  const auto& docs = corpus.documents();
  std::vector<ScoreCard> cards(docs.size());
  if (jobs < 1) jobs = 1;
  if (jobs == 1 || docs.size() < 2) {
    for (std::size_t i = 0; i < docs.size(); ++i) {
      cards[i] = score_document(docs[i], lex, common, scaling);
    }
    return cards;
  }
  std::size_t workers = std::min<std::size_t>(jobs, docs.size());
  std::vector<std::thread> threads;
  std::exception_ptr first_error;
  std::mutex error_mu;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w]() {
      try {
        for (std::size_t i = w; i < docs.size(); i += workers) {
          cards[i] = score_document(docs[i], lex, common, scaling);
        }
      } catch (...) {
        std::lock_guard<std::mutex> hold(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return cards;
}

void simplicity_index(std::vector<ScoreCard>& cards) {
  if (cards.size() < 2) {
    throw AnalysisError("simplicity_index: need at least 2 score cards");
  }
  struct Component {
    const char* name;
    double (*get)(const ScoreCard&);
  };
  const Component components[3] = {
      {"common_pct", [](const ScoreCard& c) { return c.common_pct; }},
      {"flesch", [](const ScoreCard& c) { return c.flesch; }},
      {"analytic_scaled", [](const ScoreCard& c) { return c.analytic_scaled; }},
  };
  double mean[3];
  double sd[3];
  double n = static_cast<double>(cards.size());
  for (int k = 0; k < 3; ++k) {
    double sum = 0.0;
    for (const auto& c : cards) sum += components[k].get(c);
    mean[k] = sum / n;
    double ss = 0.0;
    for (const auto& c : cards) {
      double d = components[k].get(c) - mean[k];
      ss += d * d;
    }
    sd[k] = std::sqrt(ss / (n - 1.0));
    if (!(sd[k] > 0.0)) {
      throw AnalysisError(std::string("simplicity_index: zero variance in ") +
                          components[k].name);
    }
  }
  for (auto& c : cards) {
    double zc = (c.common_pct - mean[0]) / sd[0];
    double zf = (c.flesch - mean[1]) / sd[1];
    double za = (c.analytic_scaled - mean[2]) / sd[2];
    c.simplicity_z = zc + zf - za;
    c.has_simplicity = true;
  }
}

void write_scorecards_csv(const std::string& path,
                          const std::vector<ScoreCard>& cards) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << "id,kind,word_count,common_pct,analytic_raw,analytic_scaled,flesch,"
         "simplicity_z\n";
  for (const auto& c : cards) {
    out << csv::join({c.id, corpus::kind_name(c.kind),
                      std::to_string(c.word_count),
                      format_double(c.common_pct),
                      format_double(c.analytic_raw),
                      format_double(c.analytic_scaled),
                      format_double(c.flesch),
                      c.has_simplicity ? format_double(c.simplicity_z) : ""})
        << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

void write_scorecards_jsonl(const std::string& path,
                            const std::vector<ScoreCard>& cards) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  for (const auto& c : cards) {
    nlohmann::json rec{{"id", c.id},
                       {"kind", corpus::kind_name(c.kind)},
                       {"word_count", c.word_count},
                       {"common_pct", c.common_pct},
                       {"analytic_raw", c.analytic_raw},
                       {"analytic_scaled", c.analytic_scaled},
                       {"flesch", c.flesch}};
    if (c.has_simplicity) rec["simplicity_z"] = c.simplicity_z;
    else rec["simplicity_z"] = nullptr;
    out << rec.dump() << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<ScoreCard> read_scorecards_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::vector<std::string> fields;
  if (!csv::read_record(in, fields)) {
    throw IoError(path + ": empty score file");
  }
  const std::vector<std::string> header{
      "id", "kind", "word_count", "common_pct", "analytic_raw",
      "analytic_scaled", "flesch", "simplicity_z"};
  if (fields != header) {
    throw IoError(path + ":1: unexpected score file header");
  }
  std::vector<ScoreCard> cards;
  std::size_t record = 1;
  auto parse_num = [&](const std::string& s) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') {
      throw IoError(path + ": record " + std::to_string(record) +
                    ": bad number \"" + s + "\"");
    }
    return v;
  };
  while (csv::read_record(in, fields)) {
    ++record;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != header.size()) {
      throw IoError(path + ": record " + std::to_string(record) +
                    ": expected " + std::to_string(header.size()) + " fields");
    }
    ScoreCard c;
    c.id = fields[0];
    if (!corpus::parse_kind(fields[1], c.kind)) {
      throw IoError(path + ": record " + std::to_string(record) +
                    ": unknown kind \"" + fields[1] + "\"");
    }
    c.word_count = static_cast<int>(parse_num(fields[2]));
    c.common_pct = parse_num(fields[3]);
    c.analytic_raw = parse_num(fields[4]);
    c.analytic_scaled = parse_num(fields[5]);
    c.flesch = parse_num(fields[6]);
    if (!fields[7].empty()) {
      c.simplicity_z = parse_num(fields[7]);
      c.has_simplicity = true;
    }
    cards.push_back(std::move(c));
  }
  return cards;
}

}  // namespace simtext::metrics
