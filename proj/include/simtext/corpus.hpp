#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace simtext::corpus {

enum class Kind { abstract, human_lay, ai_lay };

// Returns false for strings naming no known kind.
bool parse_kind(const std::string& s, Kind& out);
const char* kind_name(Kind k);

// True when the byte string is well-formed UTF-8 (no overlong encodings,
// surrogates, or values past U+10FFFF).
bool is_valid_utf8(const std::string& s);

struct Document {
  std::string id;
  Kind kind = Kind::abstract;
  std::string text;
  int word_count = -1;  // cached by scoring; -1 until tokenized
};

struct YokedPair {
  std::string id;
  Document abstract;
  Document lay;
};

enum class Format { jsonl, csv };

class Corpus {
public:
  Corpus() = default;

  static Corpus load(const std::string& path, Format format);
  // Picks the format from the file extension (.jsonl/.ndjson vs .csv).
  static Corpus load(const std::string& path);

  // Admits a document; rejects empty text and duplicate (id, kind).
  void add(Document doc);

  const std::vector<Document>& documents() const { return docs_; }
  std::size_t size() const { return docs_.size(); }
  bool contains(const std::string& id, Kind kind) const;

  // Count of records dropped at load time for empty/whitespace-only text.
  std::size_t skipped_empty() const { return skipped_empty_; }

  std::vector<const Document*> with_kind(Kind kind) const;

  // Pairs each abstract with the same-id document of lay_kind, sorted by id.
  // Ids lacking either member are excluded.
  std::vector<YokedPair> yoke(Kind lay_kind) const;

  // Uniform sample of n documents without replacement; original order kept.
  Corpus sample(std::size_t n, std::uint64_t seed) const;

  void save(const std::string& path, Format format) const;

private:
  std::vector<Document> docs_;
  std::set<std::pair<std::string, int>> seen_;
  std::size_t skipped_empty_ = 0;
};

struct PairScore {
  std::string id;
  double score_a = 0.0;
  double score_b = 0.0;
};

struct StimulusChoice {
  std::string id;
  double gap = 0.0;  // |score_a - score_b|
};

// Top-k pairs by absolute score gap, descending; ties broken by id ascending.
std::vector<StimulusChoice> select_stimuli(const std::vector<PairScore>& pairs,
                                           std::size_t k);

}  // namespace simtext::corpus
