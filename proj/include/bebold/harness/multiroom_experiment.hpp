#pragma once

#include <cmath>
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

inline MultiRoomConfig multiroom_config_from(const Config& cfg) {
  MultiRoomConfig mc;
  mc.num_rooms = static_cast<int>(cfg.get_int("multiroom.rooms", 4));
  mc.room_size = static_cast<int>(cfg.get_int("multiroom.room_size", 5));
  mc.layout_seed = static_cast<std::uint64_t>(cfg.get_int("multiroom.layout_seed", 0));
  mc.procedural = cfg.get_bool("multiroom.procedural", false);
  mc.max_steps = static_cast<int>(cfg.get_int("multiroom.max_steps", 0));
  mc.view_size = static_cast<int>(cfg.get_int("multiroom.view", 5));
  return mc;
}

/// Per-episode summary kept for return curves.
struct EpisodeSummary {
  std::int64_t end_step = 0;  // cumulative steps after this episode
  int steps = 0;
  double extrinsic = 0.0;
  double total = 0.0;
  bool goal = false;
  int deepest_room = 0;
  double ir_sum = 0.0;
  int ir_negative = 0;
};

struct MultiRoomRun {
  std::string row;
  std::uint64_t seed = 0;
  std::vector<EpisodeSummary> episodes;
  std::vector<std::int64_t> checkpoint_steps;  // cumulative step of each snapshot
  int deepest_room = 0;                        // over the whole run, 0-based
  int goals = 0;
  std::vector<std::optional<double>> entropy_location;
  std::vector<std::optional<double>> entropy_pose;
  std::vector<std::string> artifacts;
};

inline std::string checkpoint_stem(const std::string& row, std::uint64_t seed, int k) {
  return slug(row) + "_s" + std::to_string(seed) + "_c" + std::to_string(k);
}

/// Trains one row for `multiroom.steps` environment steps, snapshotting
/// heatmaps and (optionally) model checkpoints at K+1 evenly spaced points,
/// the first before any training.
inline MultiRoomRun multiroom_run(const Config& cfg, const RowSpec& row, std::uint64_t seed,
                                  const std::filesystem::path& out_dir) {
  MultiRoomWorld world(multiroom_config_from(cfg));
  const auto budget = cfg.get_int("multiroom.steps", 400000);
  const auto k_max = static_cast<int>(cfg.get_int("multiroom.checkpoints", 10));
  if (budget < 1 || k_max < 1) throw ConfigError("multiroom.steps and multiroom.checkpoints must be positive");
  const bool heatmaps = !out_dir.empty() && cfg.get_bool("multiroom.heatmaps", true);
  const bool save = !out_dir.empty() && cfg.get_bool("multiroom.save_checkpoints", true);

  RewardEngine engine(row.reward, predictor_from(cfg, row.reward, encoded_dim(world), seed));
  Agent agent{qtable_from(cfg, 0.99), policy_from(cfg)};
  Rng rng(derive_seed(seed, "multiroom-agent"));
  MultiRoomRun run{row.name, seed, {}, {}, 0, 0, {}, {}, {}};

  const auto snapshot = [&](int k, std::int64_t step) {
    run.checkpoint_steps.push_back(step);
    const auto stem = checkpoint_stem(row.name, seed, k);
    if (heatmaps) {
      const auto g = heatmap(engine.lifetime(), world);
      std::ostringstream csv, pgm;
      write_heatmap_csv(csv, g);
      write_heatmap_pgm(pgm, g);
      write_file(out_dir / "heatmaps" / (stem + ".csv"), csv.str());
      write_file(out_dir / "heatmaps" / (stem + ".pgm"), pgm.str());
      run.artifacts.push_back("heatmaps/" + stem + ".csv");
      run.artifacts.push_back("heatmaps/" + stem + ".pgm");
    }
    if (save) {
      std::ostringstream q, c;
      agent.q.save(q);
      save_counts(c, engine.lifetime());
      write_file(out_dir / "checkpoints" / (stem + ".qtable"), q.str());
      write_file(out_dir / "checkpoints" / (stem + ".counts"), c.str());
      run.artifacts.push_back("checkpoints/" + stem + ".qtable");
      run.artifacts.push_back("checkpoints/" + stem + ".counts");
      if (engine.predictor()) {
        std::ostringstream p;
        engine.predictor()->save(p);
        write_file(out_dir / "checkpoints" / (stem + ".rnd"), p.str());
        run.artifacts.push_back("checkpoints/" + stem + ".rnd");
      }
    }
  };

  snapshot(0, 0);
  std::int64_t steps = 0;
  int next_k = 1;
  for (std::uint64_t ep = 0; steps < budget; ++ep) {
    const auto rec = run_multiroom_episode(agent, world, engine, rng, derive_seed(seed, "multiroom-episode", ep));
    steps += rec.steps;
    EpisodeSummary s{steps, rec.steps, rec.extrinsic_return, rec.total_return, rec.reached_goal, rec.deepest_room, 0.0, 0};
    for (double ir : rec.intrinsic) {
      s.ir_sum += ir;
      s.ir_negative += ir < 0.0;
    }
    run.episodes.push_back(s);
    run.deepest_room = std::max(run.deepest_room, rec.deepest_room);
    run.goals += rec.reached_goal;
    engine.flush_training();
    while (next_k <= k_max && steps >= budget * next_k / k_max) snapshot(next_k++, steps);
  }
  run.entropy_location = multiroom_room_entropy(engine.lifetime(), world, true);
  run.entropy_pose = multiroom_room_entropy(engine.lifetime(), world, false);
  return run;
}

inline void add_multiroom_metrics(ExperimentRecord& rec, const MultiRoomRun& r, int num_rooms) {
  const auto nan = std::nan("");
  rec.add(r.row, r.seed, "rooms_reached", r.deepest_room + 1);
  rec.add(r.row, r.seed, "reached_final_room", r.deepest_room + 1 == num_rooms ? 1.0 : 0.0);
  rec.add(r.row, r.seed, "goals", r.goals);
  rec.add(r.row, r.seed, "episodes", static_cast<double>(r.episodes.size()));
  for (int k = 0; k < num_rooms; ++k) {
    rec.add(r.row, r.seed, "entropy_location_room_" + std::to_string(k + 1),
            r.entropy_location[k] ? *r.entropy_location[k] : nan);
    rec.add(r.row, r.seed, "entropy_pose_room_" + std::to_string(k + 1), r.entropy_pose[k] ? *r.entropy_pose[k] : nan);
  }
}

inline std::vector<MultiRoomRun> multiroom_runs(const Config& cfg, const std::vector<RowSpec>& rows,
                                                const std::vector<std::uint64_t>& seeds,
                                                const std::filesystem::path& out_dir) {
  return fan_out<MultiRoomRun>(rows.size() * seeds.size(), static_cast<int>(cfg.get_int("threads", 1)),
                               [&](std::size_t i) {
                                 return multiroom_run(cfg, rows[i / seeds.size()], seeds[i % seeds.size()], out_dir);
                               });
}

inline void finish_outputs(const Config& cfg, const std::filesystem::path& out_dir, ExperimentRecord& rec,
                           std::vector<std::pair<std::string, std::string>> extra_files) {
  std::ostringstream metrics, summary;
  write_metrics_csv(metrics, rec);
  write_summary_csv(summary, aggregate({rec}));
  extra_files.emplace_back("metrics.csv", metrics.str());
  extra_files.emplace_back("summary.csv", summary.str());
  for (const auto& [name, text] : extra_files) {
    write_file(out_dir / name, text);
    rec.artifacts.push_back(name);
  }
  write_manifest(out_dir, rec.experiment, cfg, rec.artifacts);
}

/// Scaled multi-room comparison of engines: frontier reached, per-room
/// entropy, visitation heatmaps over training.
inline ExperimentRecord run_multiroom(const Config& cfg, const std::filesystem::path& out_dir = {}) {
  cfg.check_known(known_config_keys());
  const auto rows = parse_rows(cfg, "multiroom.rows", {"bebold-rnd+erir+clip", "rnd"});
  const auto seeds = parse_seeds(cfg);
  const int num_rooms = multiroom_config_from(cfg).num_rooms;
  const auto runs = multiroom_runs(cfg, rows, seeds, out_dir);

  ExperimentRecord rec{"multiroom", cfg.digest(), {}, {}};
  for (const auto& r : runs) add_multiroom_metrics(rec, r, num_rooms);
  if (out_dir.empty()) return rec;

  std::ostringstream rooms, returns;
  CsvWriter rw(rooms), tw(returns);
  rw.row({"row", "seed", "room", "entropy_location", "entropy_pose"});
  tw.row({"row", "seed", "episode", "end_step", "extrinsic_return", "total_return", "goal", "deepest_room"});
  for (const auto& r : runs) {
    for (int k = 0; k < num_rooms; ++k)
      rw.row({r.row, std::to_string(r.seed), std::to_string(k + 1),
              r.entropy_location[k] ? csv_number(*r.entropy_location[k]) : "",
              r.entropy_pose[k] ? csv_number(*r.entropy_pose[k]) : ""});
    for (std::size_t e = 0; e < r.episodes.size(); ++e) {
      const auto& s = r.episodes[e];
      tw.row({r.row, std::to_string(r.seed), std::to_string(e), std::to_string(s.end_step), csv_number(s.extrinsic),
              csv_number(s.total), s.goal ? "1" : "0", std::to_string(s.deepest_room + 1)});
    }
    rec.artifacts.insert(rec.artifacts.end(), r.artifacts.begin(), r.artifacts.end());
  }
  finish_outputs(cfg, out_dir, rec, {{"room_entropy.csv", rooms.str()}, {"returns.csv", returns.str()}});
  return rec;
}

/// Clipping and episodic-restriction variants on the multi-room preset, with
/// per-window return curves.
inline ExperimentRecord run_ablation(const Config& cfg, const std::filesystem::path& out_dir = {}) {
  cfg.check_known(known_config_keys());
  const auto rows = parse_rows(cfg, "ablation.rows",
                               {"bebold-rnd+erir+clip", "bebold-rnd+clip", "rnd", "rnd+erir", "bebold-rnd+erir"});
  const auto seeds = parse_seeds(cfg);
  const int num_rooms = multiroom_config_from(cfg).num_rooms;
  Config run_cfg = cfg;
  // The ablation only needs curves; model checkpoints are a multiroom concern.
  run_cfg.set("multiroom.save_checkpoints", "false");
  run_cfg.set("multiroom.heatmaps", "false");
  const auto runs = multiroom_runs(run_cfg, rows, seeds, out_dir);

  ExperimentRecord rec{"ablation", cfg.digest(), {}, {}};
  std::ostringstream curves;
  CsvWriter w(curves);
  w.row({"row", "seed", "window", "end_step", "episodes", "mean_extrinsic_return", "goal_rate", "mean_ir_per_step",
         "negative_ir_fraction"});
  for (const auto& r : runs) {
    add_multiroom_metrics(rec, r, num_rooms);
    std::int64_t neg = 0, total_steps = 0;
    for (const auto& e : r.episodes) {
      neg += e.ir_negative;
      total_steps += e.steps;
    }
    rec.add(r.row, r.seed, "goal_rate", r.episodes.empty() ? 0.0 : static_cast<double>(r.goals) / r.episodes.size());
    rec.add(r.row, r.seed, "negative_ir_fraction", total_steps ? static_cast<double>(neg) / total_steps : 0.0);
    std::size_t e = 0;
    for (std::size_t k = 1; k < r.checkpoint_steps.size(); ++k) {
      double ext = 0.0, ir = 0.0;
      int n = 0, goals = 0, steps = 0, negs = 0;
      for (; e < r.episodes.size() && r.episodes[e].end_step <= r.checkpoint_steps[k]; ++e, ++n) {
        ext += r.episodes[e].extrinsic;
        goals += r.episodes[e].goal;
        ir += r.episodes[e].ir_sum;
        steps += r.episodes[e].steps;
        negs += r.episodes[e].ir_negative;
      }
      const auto avg = [](double x, double d) { return d > 0 ? x / d : std::nan(""); };
      w.row({r.row, std::to_string(r.seed), std::to_string(k), std::to_string(r.checkpoint_steps[k]), std::to_string(n),
             csv_number(avg(ext, n)), csv_number(avg(goals, n)), csv_number(avg(ir, steps)),
             csv_number(avg(negs, steps))});
    }
  }
  if (out_dir.empty()) return rec;
  finish_outputs(cfg, out_dir, rec, {{"ablation_curves.csv", curves.str()}});
  return rec;
}

/// Rolls out the frozen policy of each saved multiroom checkpoint and maps
/// where intrinsic reward is paid and where the policy spends its time.
inline ExperimentRecord run_ir_heatmap(const Config& cfg, const std::filesystem::path& out_dir = {}) {
  cfg.check_known(known_config_keys());
  const auto rows = parse_rows(cfg, cfg.has("ir.rows") ? "ir.rows" : "multiroom.rows", {"bebold-rnd+erir+clip", "rnd"});
  const auto seeds = parse_seeds(cfg);
  const std::filesystem::path source = cfg.get("ir.source", out_dir.string());
  if (source.empty()) throw ConfigError("ir-heatmap needs ir.source (a multiroom output directory)");
  const auto rollout_steps = static_cast<int>(cfg.get_int("ir.steps", 2000));
  const auto k_max = static_cast<int>(cfg.get_int("multiroom.checkpoints", 10));
  if (rollout_steps < 1) throw ConfigError("ir.steps must be positive");
  PolicySpec frozen{PolicyKind::kEpsilonGreedy, 0.0, 1.0, cfg.get_double("ir.floor", 0.05)};
  frozen.validate();
  const MultiRoomConfig mc = multiroom_config_from(cfg);
  // Never clobber the training run's own metrics and manifest.
  const auto dest = (!out_dir.empty() && std::filesystem::weakly_canonical(out_dir) == std::filesystem::weakly_canonical(source))
                        ? out_dir / "ir-heatmap"
                        : out_dir;

  ExperimentRecord rec{"ir-heatmap", cfg.digest(), {}, {}};
  for (const auto& row : rows)
    for (const auto seed : seeds)
      for (int k = 0; k <= k_max; ++k) {
        const auto stem = checkpoint_stem(row.name, seed, k);
        const auto base = source / "checkpoints" / stem;
        const auto open = [&](const std::string& ext) {
          const auto p = std::filesystem::path(base.string() + ext);
          if (!std::filesystem::exists(p)) throw ConfigError("missing checkpoint " + p.string());
          return std::istringstream(read_file(p));
        };
        auto qs = open(".qtable");
        auto cs = open(".counts");
        std::optional<PredictorPair> pred;
        if (uses_predictor(row.reward.criterion)) {
          auto ps = open(".rnd");
          pred = PredictorPair::load(ps);
          pred->set_teacher_cache(cfg.get_bool("rnd.teacher_cache", true));
        }
        MultiRoomWorld world(mc);
        RewardEngine engine(row.reward, std::move(pred));
        engine.mutable_lifetime() = load_counts(cs);
        Agent agent{QTable::load(qs), frozen};
        Rng rng(derive_seed(seed, "ir-rollout", static_cast<std::uint64_t>(k)));

        const auto cells = static_cast<std::size_t>(world.width() * world.height());
        std::vector<double> ir_sum(cells, 0.0), visits(cells, 0.0);
        int done_steps = 0;
        for (std::uint64_t ep = 0; done_steps < rollout_steps; ++ep) {
          std::vector<std::pair<StateKey, double>> trace;
          const auto r = run_multiroom_episode(agent, world, engine, rng, derive_seed(seed, "ir-episode", ep), false,
                                               &trace, rollout_steps - done_steps);
          done_steps += r.steps;
          for (const auto& [key, ir] : trace) {
            const auto c = static_cast<std::size_t>(pose_y(key) * world.width() + pose_x(key));
            ir_sum[c] += ir;
            visits[c] += 1.0;
          }
        }
        HeatmapGrid irg{world.width(), world.height(), ir_sum, 1.0, true};
        HeatmapGrid dens{world.width(), world.height(), visits, static_cast<double>(done_steps), true};
        double total_ir = 0.0, start_room = 0.0;
        int visited = 0;
        for (std::size_t c = 0; c < cells; ++c) {
          total_ir += ir_sum[c];
          if (visits[c] == 0.0) {
            irg.values[c] = dens.values[c] = std::nan("");
            continue;
          }
          ++visited;
          dens.values[c] /= done_steps;
          if (world.room_of(static_cast<int>(c % world.width())) == 0) start_room += dens.values[c];
        }
        const std::string tag = row.name + "@" + std::to_string(k);
        rec.add(tag, seed, "ir_total", total_ir);
        rec.add(tag, seed, "cells_visited", visited);
        rec.add(tag, seed, "start_room_density", start_room);
        if (out_dir.empty()) continue;
        for (const auto& [grid, suffix] : {std::pair{&irg, "_ir"}, std::pair{&dens, "_density"}}) {
          std::ostringstream csv, pgm;
          write_heatmap_csv(csv, *grid);
          write_heatmap_pgm(pgm, *grid);
          const auto name = "ir_heatmaps/" + stem + suffix;
          write_file(dest / (name + ".csv"), csv.str());
          write_file(dest / (name + ".pgm"), pgm.str());
          rec.artifacts.push_back(name + ".csv");
          rec.artifacts.push_back(name + ".pgm");
        }
      }
  if (out_dir.empty()) return rec;
  finish_outputs(cfg, dest, rec, {});
  return rec;
}

}  // namespace bebold
