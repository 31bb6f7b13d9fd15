#include "simtext/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "simtext/error.hpp"

namespace simtext::lexicon {

const char* const kStyleCategories[7] = {
    "articles",   "prepositions", "pronouns", "auxiliary_verbs",
    "adverbs",    "conjunctions", "negations"};

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n\f\v");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n\f\v");
  return s.substr(b, e - b + 1);
}

std::string lower_ascii(std::string s) {
  for (char& c : s) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return s;
}

}  // namespace

Lexicon Lexicon::parse(std::istream& in, const std::string& origin) {
  Lexicon lex;
  std::string line;
  std::size_t line_no = 0;
  Category* current = nullptr;
  auto close_current = [&](std::size_t at) {
    if (current && current->literals.empty() && current->prefixes.empty()) {
      throw IoError(origin + ":" + std::to_string(at) + ": category \"" +
                    current->name + "\" has no entries");
    }
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    if (s.rfind("%category", 0) == 0) {
      std::string name = trim(s.substr(9));
      if (name.empty()) {
        throw IoError(origin + ":" + std::to_string(line_no) +
                      ": %category line missing a name");
      }
      for (const auto& c : lex.categories_) {
        if (c.name == name) {
          throw IoError(origin + ":" + std::to_string(line_no) +
                        ": duplicate category \"" + name + "\"");
        }
      }
      close_current(line_no);
      lex.categories_.push_back(Category{name, {}, {}});
      current = &lex.categories_.back();
      continue;
    }
    if (!current) {
      throw IoError(origin + ":" + std::to_string(line_no) +
                    ": entry before any %category line");
    }
    std::string entry = lower_ascii(s);
    std::size_t star = entry.find('*');
    if (star != std::string::npos) {
      if (star != entry.size() - 1) {
        throw IoError(origin + ":" + std::to_string(line_no) +
                      ": wildcard must be the final character in \"" + entry +
                      "\"");
      }
      std::string prefix = entry.substr(0, star);
      if (prefix.empty()) {
        throw IoError(origin + ":" + std::to_string(line_no) +
                      ": bare \"*\" entry");
      }
      auto& ps = current->prefixes;
      if (std::find(ps.begin(), ps.end(), prefix) == ps.end()) {
        ps.push_back(prefix);
      }
    } else {
      current->literals.insert(entry);
    }
  }
  close_current(line_no + 1);
  if (in.bad()) throw IoError("read failed: " + origin);
  for (auto& cat : lex.categories_) {
    std::sort(cat.prefixes.begin(), cat.prefixes.end());
  }
  return lex;
}

Lexicon Lexicon::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  return parse(in, path);
}

std::vector<std::string> Lexicon::category_names() const {
  std::vector<std::string> names;
  names.reserve(categories_.size());
  for (const auto& c : categories_) names.push_back(c.name);
  return names;
}

const Lexicon::Category* Lexicon::find(const std::string& name) const {
  for (const auto& c : categories_) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

bool Lexicon::has_category(const std::string& name) const {
  return find(name) != nullptr;
}

std::size_t Lexicon::entry_count(const std::string& name) const {
  const Category* c = find(name);
  if (!c) throw AnalysisError("no such category: " + name);
  return c->literals.size() + c->prefixes.size();
}

bool Lexicon::matches(const Category& cat, const std::string& token) const {
  if (cat.literals.count(token)) return true;
  for (const auto& p : cat.prefixes) {
    if (token.size() >= p.size() && token.compare(0, p.size(), p) == 0) {
      return true;
    }
  }
  return false;
}

bool Lexicon::matches(const std::string& category_name,
                      const std::string& token) const {
  const Category* c = find(category_name);
  if (!c) throw AnalysisError("no such category: " + category_name);
  return matches(*c, token);
}

std::vector<std::string> Lexicon::match(const std::string& token) const {
  std::vector<std::string> hits;
  for (const auto& c : categories_) {
    if (matches(c, token)) hits.push_back(c.name);
  }
  return hits;
}

CommonWordList CommonWordList::parse(std::istream& in,
                                     const std::string& origin) {
  CommonWordList list;
  list.lex_ = Lexicon::parse(in, origin);
  if (list.lex_.categories().size() != 1) {
    throw IoError(origin + ": a common-word list must contain exactly one "
                  "category, found " +
                  std::to_string(list.lex_.categories().size()));
  }
  list.description_ = list.lex_.categories()[0].name;
  return list;
}

CommonWordList CommonWordList::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  return parse(in, path);
}

bool CommonWordList::contains(const std::string& token) const {
  return lex_.matches(lex_.categories()[0], token);
}

std::size_t CommonWordList::size() const {
  const auto& c = lex_.categories()[0];
  return c.literals.size() + c.prefixes.size();
}

}  // namespace simtext::lexicon
