#pragma once

#include <istream>
#include <set>
#include <string>
#include <vector>

namespace simtext::lexicon {

// Word-category dictionary. File format: lines "%category <name>" open a
// category, "#" lines are comments, every other non-empty line is one entry.
// Entries are lowercased on load; a trailing "*" makes a prefix pattern.
class Lexicon {
public:
  struct Category {
    std::string name;
    std::set<std::string> literals;
    std::vector<std::string> prefixes;  // stored without the trailing '*'
  };

  static Lexicon load(const std::string& path);
  static Lexicon parse(std::istream& in, const std::string& origin);

  const std::vector<Category>& categories() const { return categories_; }
  std::vector<std::string> category_names() const;
  bool has_category(const std::string& name) const;
  std::size_t entry_count(const std::string& name) const;

  // Category names covering the token; literals checked before prefixes.
  std::vector<std::string> match(const std::string& token) const;
  bool matches(const Category& cat, const std::string& token) const;
  bool matches(const std::string& category_name,
               const std::string& token) const;

private:
  const Category* find(const std::string& name) const;
  std::vector<Category> categories_;
};

// The seven categories the analytic-writing composite requires.
extern const char* const kStyleCategories[7];

// Everyday-word list: a lexicon file holding exactly one category.
class CommonWordList {
public:
  static CommonWordList load(const std::string& path);
  static CommonWordList parse(std::istream& in, const std::string& origin);

  bool contains(const std::string& token) const;
  std::size_t size() const;
  const std::string& description() const { return description_; }

private:
  std::string description_;
  Lexicon lex_;
};

}  // namespace simtext::lexicon
