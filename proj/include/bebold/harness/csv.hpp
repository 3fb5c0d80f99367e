#pragma once

#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "bebold/core/error.hpp"
#include "bebold/harness/config.hpp"

namespace bebold {

/// Quotes a field when it holds a separator, quote or line break; inner
/// quotes are doubled.
inline std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

/// Empty for NaN (an absent value), shortest round-trip text otherwise.
inline std::string csv_number(double v) { return std::isnan(v) ? std::string() : format_double(v); }

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) os_ << (i ? "," : "") << csv_escape(fields[i]);
    os_ << "\r\n";
  }

 private:
  std::ostream& os_;
};

/// Parses RFC 4180 text. Accepts LF or CRLF record ends.
inline std::vector<std::vector<std::string>> read_csv(std::istream& is) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  char c;
  while (is.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (is.peek() == '"') {
          is.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && is.peek() == '\n') is.get(c);
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw ConfigError("unterminated quoted CSV field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace bebold
