#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bebold/core/error.hpp"
#include "bebold/core/rng.hpp"

namespace bebold {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto p = s.find(sep, start);
    auto item = trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

/// Shortest decimal text that round-trips the double.
inline std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

/// Flat `key = value` configuration. `#` starts a comment; later assignments
/// override earlier ones. Values are kept as text and parsed on access.
class Config {
 public:
  Config() = default;

  static Config parse(std::string_view text, std::string_view origin = "config") {
    Config c;
    c.merge_text(text, origin);
    return c;
  }

  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
  }

  void merge_text(std::string_view text, std::string_view origin = "config") {
    int line_no = 0;
    for (const auto& raw : split_lines(text)) {
      ++line_no;
      std::string line = raw;
      if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError(std::string(origin) + ":" + std::to_string(line_no) + ": expected key = value");
      const auto key = trim(std::string_view(line).substr(0, eq));
      if (key.empty()) throw ConfigError(std::string(origin) + ":" + std::to_string(line_no) + ": empty key");
      values_[key] = trim(std::string_view(line).substr(eq + 1));
    }
  }

  void merge(const Config& other) {
    for (const auto& [k, v] : other.values_) values_[k] = v;
  }

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }
  std::string require(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    return has(key) ? to_double(key, require(key)) : fallback;
  }
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
    return has(key) ? to_int(key, require(key)) : fallback;
  }
  bool get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto v = require(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "': expected a boolean, got '" + v + "'");
  }
  std::vector<std::string> get_list(const std::string& key, const std::vector<std::string>& fallback) const {
    return has(key) ? split(require(key), ',') : fallback;
  }
  std::vector<std::int64_t> get_int_list(const std::string& key, const std::vector<std::int64_t>& fallback) const {
    if (!has(key)) return fallback;
    std::vector<std::int64_t> out;
    for (const auto& s : split(require(key), ',')) out.push_back(to_int(key, s));
    return out;
  }
  std::vector<double> get_double_list(const std::string& key, const std::vector<double>& fallback) const {
    if (!has(key)) return fallback;
    std::vector<double> out;
    for (const auto& s : split(require(key), ',')) out.push_back(to_double(key, s));
    return out;
  }

  /// Rejects keys outside `known`, which catches typos in config files.
  void check_known(const std::set<std::string>& known) const {
    for (const auto& [k, _] : values_)
      if (!known.count(k)) throw ConfigError("unknown config key '" + k + "'");
  }

  /// Sorted `key = value` lines; the digest is taken over this text.
  std::string canonical() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
    return out;
  }

  /// FNV-1a over the canonical text minus `seeds` and `threads`: runs that
  /// differ only in which seeds they cover (or how many workers ran them)
  /// share a digest and can be aggregated together.
  std::string digest() const {
    std::string text;
    for (const auto& [k, v] : values_)
      if (k != "seeds" && k != "threads") text += k + " = " + v + "\n";
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
    return buf;
  }

 private:
  static std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto p = text.find('\n', start);
      lines.emplace_back(text.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
      if (p == std::string_view::npos) break;
      start = p + 1;
    }
    return lines;
  }

  static double to_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size())
      throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
    return d;
  }
  static std::int64_t to_int(const std::string& key, const std::string& v) {
    std::int64_t out = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size())
      throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
    return out;
  }

  std::map<std::string, std::string> values_;
};

}  // namespace bebold
