#include "simtext/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "simtext/csv.hpp"
#include "simtext/error.hpp"
#include "simtext/rng.hpp"

namespace simtext::corpus {

bool parse_kind(const std::string& s, Kind& out) {
  if (s == "abstract") out = Kind::abstract;
  else if (s == "human_lay") out = Kind::human_lay;
  else if (s == "ai_lay") out = Kind::ai_lay;
  else return false;
  return true;
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::abstract: return "abstract";
    case Kind::human_lay: return "human_lay";
    case Kind::ai_lay: return "ai_lay";
  }
  return "abstract";
}

bool is_valid_utf8(const std::string& s) {
  const unsigned char* p = reinterpret_cast<const unsigned char*>(s.data());
  std::size_t n = s.size();
  std::size_t i = 0;
  while (i < n) {
    unsigned char b = p[i];
    if (b < 0x80) {
      ++i;
    } else if ((b & 0xe0) == 0xc0) {
      if (i + 1 >= n || (p[i + 1] & 0xc0) != 0x80) return false;
      unsigned cp = ((b & 0x1fu) << 6) | (p[i + 1] & 0x3fu);
      if (cp < 0x80) return false;
      i += 2;
    } else if ((b & 0xf0) == 0xe0) {
      if (i + 2 >= n || (p[i + 1] & 0xc0) != 0x80 || (p[i + 2] & 0xc0) != 0x80)
        return false;
      unsigned cp = ((b & 0x0fu) << 12) | ((p[i + 1] & 0x3fu) << 6) |
                    (p[i + 2] & 0x3fu);
      if (cp < 0x800 || (cp >= 0xd800 && cp <= 0xdfff)) return false;
      i += 3;
    } else if ((b & 0xf8) == 0xf0) {
      if (i + 3 >= n || (p[i + 1] & 0xc0) != 0x80 ||
          (p[i + 2] & 0xc0) != 0x80 || (p[i + 3] & 0xc0) != 0x80)
        return false;
      unsigned cp = ((b & 0x07u) << 18) | ((p[i + 1] & 0x3fu) << 12) |
                    ((p[i + 2] & 0x3fu) << 6) | (p[i + 3] & 0x3fu);
      if (cp < 0x10000 || cp > 0x10ffff) return false;
      i += 4;
    } else {
      return false;
    }
  }
  return true;
}

namespace {

bool is_blank(const std::string& s) {
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\r' && c != '\n' && c != '\f' &&
        c != '\v')
      return false;
  }
  return true;
}

void admit_record(Corpus& corpus, const std::string& path, std::size_t line,
                  const std::string& id, const std::string& kind_str,
                  const std::string& text) {
  Kind kind;
  if (!parse_kind(kind_str, kind)) {
    throw IoError(path + ":" + std::to_string(line) + ": unknown kind \"" +
                  kind_str + "\"");
  }
  if (id.empty()) {
    throw IoError(path + ":" + std::to_string(line) + ": empty id");
  }
  if (!is_valid_utf8(id) || !is_valid_utf8(text)) {
    throw IoError(path + ":" + std::to_string(line) + ": invalid UTF-8");
  }
  if (corpus.contains(id, kind)) {
    throw IoError(path + ":" + std::to_string(line) + ": duplicate (" + id +
                  ", " + kind_str + ")");
  }
  corpus.add(Document{id, kind, text, -1});
}

Corpus load_jsonl(const std::string& path, std::size_t& skipped) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw IoError(path + ":" + std::to_string(line_no) +
                    ": malformed JSON record: " + e.what());
    }
    if (!rec.is_object() || !rec.contains("id") || !rec.contains("kind") ||
        !rec.contains("text") || !rec["id"].is_string() ||
        !rec["kind"].is_string() || !rec["text"].is_string()) {
      throw IoError(path + ":" + std::to_string(line_no) +
                    ": record must have string fields id, kind, text");
    }
    std::string text = rec["text"].get<std::string>();
    if (is_blank(text)) {
      ++skipped;
      continue;
    }
    admit_record(corpus, path, line_no, rec["id"].get<std::string>(),
                 rec["kind"].get<std::string>(), text);
  }
  return corpus;
}

Corpus load_csv(const std::string& path, std::size_t& skipped) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::vector<std::string> fields;
  std::size_t consumed = 0;
  if (!csv::read_record(in, fields, &consumed)) {
    return Corpus{};
  }
  if (fields != std::vector<std::string>{"id", "kind", "text"}) {
    throw IoError(path + ":1: expected header id,kind,text");
  }
  Corpus corpus;
  std::size_t line_no = 1 + consumed;
  while (true) {
    std::size_t start = line_no;
    bool more;
    try {
      more = csv::read_record(in, fields, &consumed);
    } catch (const IoError& e) {
      throw IoError(path + ":" + std::to_string(start) + ": " + e.what());
    }
    if (!more) break;
    line_no += consumed;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 3) {
      throw IoError(path + ":" + std::to_string(start) +
                    ": expected 3 fields, got " +
                    std::to_string(fields.size()));
    }
    if (is_blank(fields[2])) {
      ++skipped;
      continue;
    }
    admit_record(corpus, path, start, fields[0], fields[1], fields[2]);
  }
  return corpus;
}

}  // namespace

Corpus Corpus::load(const std::string& path, Format format) {
  std::size_t skipped = 0;
  Corpus corpus = format == Format::jsonl ? load_jsonl(path, skipped)
                                          : load_csv(path, skipped);
  corpus.skipped_empty_ = skipped;
  return corpus;
}

Corpus Corpus::load(const std::string& path) {
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "csv") return load(path, Format::csv);
  return load(path, Format::jsonl);
}

void Corpus::add(Document doc) {
  if (is_blank(doc.text)) {
    throw AnalysisError("document " + doc.id + " has empty text");
  }
  auto key = std::make_pair(doc.id, static_cast<int>(doc.kind));
  if (!seen_.insert(key).second) {
    throw AnalysisError("duplicate document (" + doc.id + ", " +
                        kind_name(doc.kind) + ")");
  }
  docs_.push_back(std::move(doc));
}

bool Corpus::contains(const std::string& id, Kind kind) const {
  return seen_.count(std::make_pair(id, static_cast<int>(kind))) > 0;
}

std::vector<const Document*> Corpus::with_kind(Kind kind) const {
  std::vector<const Document*> out;
  for (const auto& d : docs_) {
    if (d.kind == kind) out.push_back(&d);
  }
  return out;
}

std::vector<YokedPair> Corpus::yoke(Kind lay_kind) const {
  if (lay_kind == Kind::abstract) {
    throw AnalysisError("yoke: lay kind must be human_lay or ai_lay");
  }
  std::map<std::string, const Document*> abstracts;
  std::map<std::string, const Document*> lays;
  for (const auto& d : docs_) {
    if (d.kind == Kind::abstract) abstracts[d.id] = &d;
    else if (d.kind == lay_kind) lays[d.id] = &d;
  }
  std::vector<YokedPair> pairs;
  for (const auto& [id, abs_doc] : abstracts) {
    auto it = lays.find(id);
    if (it != lays.end()) {
      pairs.push_back(YokedPair{id, *abs_doc, *it->second});
    }
  }
  return pairs;  // map iteration is already id-ascending
}

Corpus Corpus::sample(std::size_t n, std::uint64_t seed) const {
  if (n > docs_.size()) {
    throw AnalysisError("sample: n=" + std::to_string(n) +
                        " exceeds corpus size " + std::to_string(docs_.size()));
  }
  std::vector<std::size_t> idx(docs_.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + static_cast<std::size_t>(
                            rng.next_below(idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  Corpus out;
  for (std::size_t i : idx) out.add(docs_[i]);
  return out;
}

void Corpus::save(const std::string& path, Format format) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  if (format == Format::jsonl) {
    for (const auto& d : docs_) {
      nlohmann::json rec{{"id", d.id}, {"kind", kind_name(d.kind)},
                         {"text", d.text}};
      out << rec.dump() << "\n";
    }
  } else {
    out << "id,kind,text\n";
    for (const auto& d : docs_) {
      out << csv::join({d.id, kind_name(d.kind), d.text}) << "\n";
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<StimulusChoice> select_stimuli(const std::vector<PairScore>& pairs,
                                           std::size_t k) {
  if (k > pairs.size()) {
    throw AnalysisError("select_stimuli: k=" + std::to_string(k) +
                        " exceeds pair count " + std::to_string(pairs.size()));
  }
  std::vector<StimulusChoice> ranked;
  ranked.reserve(pairs.size());
  for (const auto& p : pairs) {
    ranked.push_back(StimulusChoice{p.id, std::fabs(p.score_a - p.score_b)});
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const StimulusChoice& a, const StimulusChoice& b) {
              if (a.gap != b.gap) return a.gap > b.gap;
              return a.id < b.id;
            });
  ranked.resize(k);
  return ranked;
}

}  // namespace simtext::corpus
