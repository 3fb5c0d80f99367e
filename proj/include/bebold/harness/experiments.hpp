#pragma once

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "bebold/harness/corridor_experiment.hpp"
#include "bebold/harness/manifest.hpp"
#include "bebold/harness/multiroom_experiment.hpp"
#include "bebold/harness/ode_experiment.hpp"
#include "bebold/harness/presets.hpp"
#include "bebold/harness/record.hpp"

namespace bebold {

/// Loads per-seed records (run directories or metrics.csv files), checks
/// they share one configuration, and writes summary.csv plus a manifest.
inline std::vector<SummaryRow> run_aggregate(const std::vector<std::filesystem::path>& inputs,
                                             const std::filesystem::path& out_dir = {}) {
  if (inputs.empty()) throw ConfigError("aggregate needs at least one input");
  std::vector<ExperimentRecord> recs;
  for (const auto& in : inputs) {
    if (std::filesystem::is_directory(in)) {
      recs.push_back(load_record(in));
    } else {
      std::istringstream s(read_file(in));
      recs.push_back(read_metrics_csv(s));
    }
  }
  const auto rows = aggregate(recs);
  if (!out_dir.empty()) {
    std::ostringstream summary;
    write_summary_csv(summary, rows);
    write_file(out_dir / "summary.csv", summary.str());
    Config provenance;
    provenance.set("experiment", recs.front().experiment);
    provenance.set("source_digest", recs.front().config_digest);
    provenance.set("records", std::to_string(recs.size()));
    write_manifest(out_dir, "aggregate", provenance, {"summary.csv"});
  }
  return rows;
}

}  // namespace bebold
