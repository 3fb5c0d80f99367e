#pragma once

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "bebold/agents/episode.hpp"
#include "bebold/counting/metrics.hpp"
#include "bebold/harness/common.hpp"
#include "bebold/harness/manifest.hpp"
#include "bebold/harness/record.hpp"
#include "bebold/rnd/encode.hpp"

namespace bebold {

struct CorridorRun {
  std::string row;
  std::uint64_t seed = 0;
  CorridorTotals totals;
};

inline CorridorWorld corridor_world_from(const Config& cfg) {
  std::vector<int> lengths;
  for (auto v : cfg.get_int_list("corridor.lengths", {40, 10, 30, 10})) lengths.push_back(static_cast<int>(v));
  const auto mode_s = cfg.get("corridor.mode", "bandit");
  CorridorMode mode;
  if (mode_s == "bandit")
    mode = CorridorMode::kBandit;
  else if (mode_s == "stepwise")
    mode = CorridorMode::kStepwise;
  else
    throw ConfigError("corridor.mode must be bandit or stepwise");
  return CorridorWorld(lengths, mode, static_cast<int>(cfg.get_int("corridor.horizon", 0)));
}

/// One training run of one row on the corridor world.
inline CorridorRun corridor_run(const Config& cfg, const RowSpec& row, std::uint64_t seed) {
  CorridorWorld world = corridor_world_from(cfg);
  const auto episodes = cfg.get_int("corridor.episodes", 3000);
  if (episodes < 1) throw ConfigError("corridor.episodes must be positive");
  RewardEngine engine(row.reward, predictor_from(cfg, row.reward, encoded_dim(world), seed));
  Agent agent{qtable_from(cfg, 1.0), policy_from(cfg)};
  Rng rng(derive_seed(seed, "corridor-agent"));
  for (std::int64_t e = 0; e < episodes; ++e) {
    if (world.mode() == CorridorMode::kBandit)
      run_corridor_bandit_episode(agent, world, engine, rng);
    else
      run_corridor_stepwise_episode(agent, world, engine, rng);
  }
  engine.flush_training();
  return {row.name, seed, corridor_totals(engine.lifetime(), world)};
}

/// Corridor entropy experiment: every row over every seed. With a non-empty
/// `out_dir`, writes metrics.csv, summary.csv, corridor_table.csv and a
/// manifest there.
inline ExperimentRecord run_corridor(const Config& cfg, const std::filesystem::path& out_dir = {}) {
  cfg.check_known(known_config_keys());
  const auto rows = parse_rows(cfg, "corridor.rows", {"count", "bebold-tab+erir", "rnd", "bebold-rnd+erir"});
  const auto seeds = parse_seeds(cfg);
  const int m = corridor_world_from(cfg).num_corridors();
  const auto runs = fan_out<CorridorRun>(rows.size() * seeds.size(), static_cast<int>(cfg.get_int("threads", 1)),
                                         [&](std::size_t i) { return corridor_run(cfg, rows[i / seeds.size()], seeds[i % seeds.size()]); });

  ExperimentRecord rec{"corridor", cfg.digest(), {}, {}};
  for (const auto& r : runs) {
    for (int j = 0; j < m; ++j) rec.add(r.row, r.seed, "corridor_" + std::to_string(j + 1), r.totals.totals[j]);
    rec.add(r.row, r.seed, "entropy_bits", r.totals.entropy_bits);
    rec.add(r.row, r.seed, "max_share", r.totals.max_share());
  }
  if (out_dir.empty()) return rec;

  std::ostringstream metrics, summary, table;
  write_metrics_csv(metrics, rec);
  const auto agg = aggregate({rec});
  write_summary_csv(summary, agg);
  CsvWriter w(table);
  std::vector<std::string> header{"row"};
  for (int j = 1; j <= m; ++j) {
    header.push_back("corridor_" + std::to_string(j) + "_mean");
    header.push_back("corridor_" + std::to_string(j) + "_std");
  }
  for (const char* h : {"entropy_mean", "entropy_std", "n_seeds"}) header.push_back(h);
  w.row(header);
  for (const auto& row : rows) {
    std::vector<std::string> f{row.name};
    const auto add = [&](const std::string& metric) {
      const auto s = summarize(rec.values(row.name, metric));
      f.push_back(csv_number(s.mean));
      f.push_back(csv_number(s.std));
      return s.n;
    };
    for (int j = 1; j <= m; ++j) add("corridor_" + std::to_string(j));
    f.push_back(std::to_string(add("entropy_bits")));
    w.row(f);
  }
  write_file(out_dir / "metrics.csv", metrics.str());
  write_file(out_dir / "summary.csv", summary.str());
  write_file(out_dir / "corridor_table.csv", table.str());
  rec.artifacts = {"metrics.csv", "summary.csv", "corridor_table.csv"};
  write_manifest(out_dir, rec.experiment, cfg, rec.artifacts);
  return rec;
}

}  // namespace bebold
