#pragma once

#include <istream>
#include <string>
#include <vector>

#include "simtext/error.hpp"

namespace simtext::csv {

// Reads one CSV record, honoring quoted fields that may contain commas,
// doubled quotes, and embedded newlines. Returns false at end of input.
// lines_consumed, when given, receives the newline count the record spanned
// so callers can keep accurate line numbers in diagnostics.
inline bool read_record(std::istream& in, std::vector<std::string>& fields,
                        std::size_t* lines_consumed = nullptr) {
  fields.clear();
  if (lines_consumed) *lines_consumed = 0;
  int c = in.get();
  if (c == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  bool any = false;
  while (true) {
    if (c == std::char_traits<char>::eof()) {
      if (quoted) throw IoError("csv: unterminated quoted field");
      break;
    }
    char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        int peek = in.peek();
        if (peek == '"') {
          in.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n' && lines_consumed) ++*lines_consumed;
        field.push_back(ch);
      }
    } else if (ch == '"' && field.empty() && !any) {
      quoted = true;
      any = true;
    } else if (ch == ',') {
      fields.push_back(field);
      field.clear();
      any = false;
    } else if (ch == '\r' && in.peek() == '\n') {
      in.get();
      if (lines_consumed) ++*lines_consumed;
      break;
    } else if (ch == '\n') {
      if (lines_consumed) ++*lines_consumed;
      break;
    } else {
      field.push_back(ch);
      any = true;
    }
    c = in.get();
  }
  fields.push_back(field);
  return true;
}

inline std::string quote(const std::string& field) {
  bool needs = field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out.push_back(ch);
  }
  out += "\"";
  return out;
}

inline std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += quote(fields[i]);
  }
  return out;
}

}  // namespace simtext::csv
