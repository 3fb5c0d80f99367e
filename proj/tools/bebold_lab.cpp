// Command-line front end for the exploration experiments.
//
//   bebold_lab corridor   [--preset P] [--config F] [--seed 1,2] [--out DIR] [--set k=v]...
//   bebold_lab multiroom  ...
//   bebold_lab ablation   ...
//   bebold_lab ir-heatmap ...   (reads checkpoints written by multiroom)
//   bebold_lab ode        ...
//   bebold_lab aggregate  RUN_DIR_OR_METRICS_CSV... [--out DIR]
//   bebold_lab presets

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bebold/harness/experiments.hpp"

namespace {

struct RunOptions {
  std::string preset;
  std::string config_file;
  std::string seeds;
  std::string out;
  std::vector<std::string> sets;
};

void add_run_options(CLI::App* sub, RunOptions& o) {
  sub->add_option("--preset", o.preset, "named base configuration (default: the subcommand's own)");
  sub->add_option("--config", o.config_file, "flat key = value file applied over the preset")->check(CLI::ExistingFile);
  sub->add_option("--seed", o.seeds, "comma-separated seed list, overrides 'seeds'");
  sub->add_option("--out", o.out, "output directory (default: out/<subcommand>)");
  sub->add_option("--set", o.sets, "extra key=value override, repeatable");
}

bebold::Config build_config(const std::string& name, const RunOptions& o) {
  bebold::Config cfg = bebold::preset(o.preset.empty() ? name : o.preset);
  if (!o.config_file.empty()) cfg.merge(bebold::Config::load(o.config_file));
  for (const auto& kv : o.sets) cfg.merge_text(kv, "--set");
  if (!o.seeds.empty()) cfg.set("seeds", o.seeds);
  return cfg;
}

void print_summary(const bebold::ExperimentRecord& rec) {
  for (const auto& s : bebold::aggregate({rec}))
    std::printf("%-28s %-28s n=%zu mean=%.6g std=%.6g%s\n", s.row.c_str(), s.metric.c_str(), s.stats.n, s.stats.mean,
                s.stats.std, s.stats.single_seed ? " (single seed)" : "");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BeBold exploration lab: corridor, multi-room, ODE and RND experiments"};
  app.require_subcommand(1);

  using Runner = bebold::ExperimentRecord (*)(const bebold::Config&, const std::filesystem::path&);
  const std::vector<std::pair<std::string, Runner>> runners = {
      {"corridor", bebold::run_corridor},   {"multiroom", bebold::run_multiroom}, {"ablation", bebold::run_ablation},
      {"ir-heatmap", bebold::run_ir_heatmap}, {"ode", bebold::run_ode},
  };
  std::vector<RunOptions> opts(runners.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < runners.size(); ++i) {
    subs.push_back(app.add_subcommand(runners[i].first, "run the " + runners[i].first + " experiment"));
    add_run_options(subs.back(), opts[i]);
  }

  std::vector<std::string> agg_inputs;
  std::string agg_out;
  auto* agg = app.add_subcommand("aggregate", "mean and sample std across per-seed records");
  agg->add_option("inputs", agg_inputs, "run directories or metrics.csv files")->required();
  agg->add_option("--out", agg_out, "directory for summary.csv and manifest.txt");
  auto* presets = app.add_subcommand("presets", "list preset names and their contents");

  CLI11_PARSE(app, argc, argv);

  try {
    if (presets->parsed()) {
      for (const auto& name : bebold::preset_names())
        std::cout << "[" << name << "]\n" << bebold::preset(name).canonical() << "\n";
      return 0;
    }
    if (agg->parsed()) {
      std::vector<std::filesystem::path> in(agg_inputs.begin(), agg_inputs.end());
      for (const auto& s : bebold::run_aggregate(in, agg_out))
        std::printf("%-28s %-28s n=%zu mean=%.6g std=%.6g%s\n", s.row.c_str(), s.metric.c_str(), s.stats.n,
                    s.stats.mean, s.stats.std, s.stats.single_seed ? " (single seed)" : "");
      return 0;
    }
    for (std::size_t i = 0; i < runners.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      const auto cfg = build_config(runners[i].first, opts[i]);
      const std::filesystem::path out = opts[i].out.empty() ? "out/" + runners[i].first : opts[i].out;
      const auto rec = runners[i].second(cfg, out);
      print_summary(rec);
      std::printf("wrote %zu artifacts to %s (config digest %s)\n", rec.artifacts.size(), out.string().c_str(),
                  rec.config_digest.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
