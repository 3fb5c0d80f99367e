#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bebold/core/error.hpp"
#include "bebold/harness/csv.hpp"
#include "bebold/harness/stats.hpp"

namespace bebold {

/// One scalar observation: `row` names the engine/variant, e.g. "bebold-tab+erir".
struct MetricRow {
  std::string row;
  std::uint64_t seed = 0;
  std::string metric;
  double value = 0.0;

  friend bool operator==(const MetricRow&, const MetricRow&) = default;
};

struct ExperimentRecord {
  std::string experiment;
  std::string config_digest;
  std::vector<MetricRow> metrics;
  std::vector<std::string> artifacts;  // paths relative to the output directory

  void add(const std::string& row, std::uint64_t seed, const std::string& metric, double value) {
    metrics.push_back({row, seed, metric, value});
  }

  /// Values of one metric for one row, in insertion (seed) order.
  std::vector<double> values(const std::string& row, const std::string& metric) const {
    std::vector<double> out;
    for (const auto& m : metrics)
      if (m.row == row && m.metric == metric) out.push_back(m.value);
    return out;
  }

  std::vector<std::string> rows() const {
    std::vector<std::string> out;
    for (const auto& m : metrics)
      if (std::find(out.begin(), out.end(), m.row) == out.end()) out.push_back(m.row);
    return out;
  }
};

struct SummaryRow {
  std::string row;
  std::string metric;
  Summary stats;
};

/// Mean and sample standard deviation per (row, metric) across seeds.
/// Records must come from the same experiment and configuration.
inline std::vector<SummaryRow> aggregate(const std::vector<ExperimentRecord>& records) {
  if (records.empty()) throw ConfigError("aggregate needs at least one record");
  for (const auto& r : records)
    if (r.config_digest != records.front().config_digest || r.experiment != records.front().experiment)
      throw ConfigError("refusing to aggregate records from different configurations (" +
                        records.front().experiment + "/" + records.front().config_digest + " vs " + r.experiment +
                        "/" + r.config_digest + ")");
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
  for (const auto& r : records)
    for (const auto& m : r.metrics) {
      const auto key = std::pair{m.row, m.metric};
      auto [it, fresh] = groups.try_emplace(key);
      if (fresh) order.push_back(key);
      if (!std::isnan(m.value)) it->second.push_back(m.value);
    }
  std::vector<SummaryRow> out;
  for (const auto& key : order) {
    const auto& xs = groups[key];
    SummaryRow s{key.first, key.second, {}};
    if (xs.empty()) {
      s.stats.mean = s.stats.std = std::nan("");
    } else {
      s.stats = summarize(xs);
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline void write_metrics_csv(std::ostream& os, const ExperimentRecord& rec) {
  CsvWriter w(os);
  w.row({"experiment", "config_digest", "row", "seed", "metric", "value"});
  for (const auto& m : rec.metrics)
    w.row({rec.experiment, rec.config_digest, m.row, std::to_string(m.seed), m.metric, csv_number(m.value)});
}

inline ExperimentRecord read_metrics_csv(std::istream& is) {
  const auto rows = read_csv(is);
  if (rows.empty() || rows.front() != std::vector<std::string>{"experiment", "config_digest", "row", "seed", "metric", "value"})
    throw ConfigError("not a metrics CSV (bad header)");
  ExperimentRecord rec;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() == 1 && r[0].empty()) continue;
    if (r.size() != 6) throw ConfigError("metrics CSV line " + std::to_string(i + 1) + " has " + std::to_string(r.size()) + " fields");
    if (i == 1) {
      rec.experiment = r[0];
      rec.config_digest = r[1];
    } else if (r[0] != rec.experiment || r[1] != rec.config_digest) {
      throw ConfigError("metrics CSV mixes configurations");
    }
    rec.add(r[2], std::stoull(r[3]), r[4], r[5].empty() ? std::nan("") : std::strtod(r[5].c_str(), nullptr));
  }
  return rec;
}

inline void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  CsvWriter w(os);
  w.row({"row", "metric", "n", "mean", "std", "single_seed"});
  for (const auto& s : rows)
    w.row({s.row, s.metric, std::to_string(s.stats.n), csv_number(s.stats.mean), csv_number(s.stats.std),
           s.stats.single_seed ? "true" : "false"});
}

inline std::vector<SummaryRow> read_summary_csv(std::istream& is) {
  const auto rows = read_csv(is);
  if (rows.empty() || rows.front().size() != 6 || rows.front()[0] != "row") throw ConfigError("not a summary CSV");
  std::vector<SummaryRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 6) continue;
    const auto num = [](const std::string& s) { return s.empty() ? std::nan("") : std::strtod(s.c_str(), nullptr); };
    out.push_back({r[0], r[1], {std::stoul(r[2]), num(r[3]), num(r[4]), r[5] == "true"}});
  }
  return out;
}

inline bool same_within(double a, double b, double tol) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

/// Loads `metrics.csv` from a run directory and, when `summary.csv` is
/// present, checks that it is recomputable from the per-seed rows.
inline ExperimentRecord load_record(const std::filesystem::path& dir, double tol = 1e-12) {
  std::ifstream m(dir / "metrics.csv", std::ios::binary);
  if (!m) throw ConfigError("no metrics.csv in " + dir.string());
  ExperimentRecord rec = read_metrics_csv(m);
  std::ifstream s(dir / "summary.csv", std::ios::binary);
  if (s) {
    const auto stored = read_summary_csv(s);
    const auto fresh = aggregate({rec});
    if (stored.size() != fresh.size()) throw ConfigError("summary.csv does not match metrics.csv (row count)");
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      const auto& a = stored[i];
      const auto& b = fresh[i];
      if (a.row != b.row || a.metric != b.metric || a.stats.n != b.stats.n || !same_within(a.stats.mean, b.stats.mean, tol) ||
          !same_within(a.stats.std, b.stats.std, tol))
        throw ConfigError("summary.csv does not match metrics.csv at " + b.row + "/" + b.metric);
    }
  }
  return rec;
}

}  // namespace bebold
