#pragma once

#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "bebold/dynamics/discrete.hpp"
#include "bebold/dynamics/ode.hpp"
#include "bebold/harness/common.hpp"
#include "bebold/harness/manifest.hpp"
#include "bebold/harness/record.hpp"

namespace bebold {

/// Largest |x_l + x_r - t - (x_l(0) + x_r(0))| per unit of elapsed time.
inline double conservation_drift(const Trajectory& tr) {
  if (tr.states.empty()) return 0.0;
  const auto& s0 = tr.states.front();
  const double c0 = s0.x_l + s0.x_r - s0.t;
  double worst = 0.0;
  for (const auto& s : tr.states)
    if (s.t > s0.t) worst = std::max(worst, std::abs(s.x_l + s.x_r - s.t - c0) / (s.t - s0.t));
  return worst;
}

inline double peak_ratio(const Trajectory& tr) {
  double best = 0.0;
  for (const auto& s : tr.states) best = std::max(best, std::max(s.x_l / s.x_r, s.x_r / s.x_l));
  return best;
}

inline std::string ode_row_name(double tl, double tr, double a) {
  return format_double(tl) + "/" + format_double(tr) + "/" + format_double(a);
}

/// Parameter sweep of the two-corridor ODE plus, for the first parameter
/// triple, a trajectory dump and the Monte-Carlo bandit comparison.
inline ExperimentRecord run_ode(const Config& cfg, const std::filesystem::path& out_dir = {}) {
  cfg.check_known(known_config_keys());
  const auto tls = cfg.get_double_list("ode.t_l", {40});
  const auto trs = cfg.get_double_list("ode.t_r", {10});
  const auto alphas = cfg.get_double_list("ode.alpha", {0.01});
  const double horizon = cfg.get_double("ode.horizon", 5000);
  const double dt = cfg.get_double("ode.dt", 0.1);
  if (tls.empty() || trs.empty() || alphas.empty()) throw ConfigError("ode sweep lists must be non-empty");

  ExperimentRecord rec{"ode", cfg.digest(), {}, {}};
  std::ostringstream sweep, traj, disc;
  CsvWriter sw(sweep);
  sw.row({"T_l", "T_r", "alpha", "t_cross", "x_l_cross", "analytic_threshold"});
  bool first = true;
  for (double tl : tls)
    for (double trr : trs)
      for (double a : alphas) {
        const OdeParams p{tl, trr, a};
        const Trajectory tr = integrate(p, {}, horizon, dt);
        if (!tr.ok) throw DomainError(tr.error);
        const Crossing c = crossing_point(tr, p);
        const bool found = c.status == CrossingStatus::kFound;
        const double nan = std::nan("");
        sw.row({format_double(tl), format_double(trr), format_double(a), csv_number(found ? c.t : nan),
                csv_number(found ? c.x_l : nan), csv_number(c.analytic_threshold)});
        const auto name = ode_row_name(tl, trr, a);
        rec.add(name, 0, "crossing_found", found ? 1.0 : 0.0);
        rec.add(name, 0, "degenerate", c.status == CrossingStatus::kDegenerate ? 1.0 : 0.0);
        rec.add(name, 0, "t_cross", found ? c.t : nan);
        rec.add(name, 0, "x_l_cross", found ? c.x_l : nan);
        rec.add(name, 0, "analytic_threshold", c.analytic_threshold);
        rec.add(name, 0, "conservation_drift", conservation_drift(tr));
        rec.add(name, 0, "peak_ratio", peak_ratio(tr));
        const auto& last = tr.states.back();
        rec.add(name, 0, "final_left_share", (last.x_l - 1.0) / last.t);
        if (!first) continue;
        first = false;

        CsvWriter tw(traj);
        tw.row({"t", "x_l", "x_r", "pi_left"});
        CorridorOde ode(p);
        for (double t = 0; t <= horizon + 1e-9; t += 1.0) {
          const auto s = sample_at(tr, t);
          tw.row({format_double(t), csv_number(s.x_l), csv_number(s.x_r), csv_number(ode.left_rate(s.x_l, s.x_r))});
        }
        DiscreteConfig dc;
        dc.ode = p;
        dc.episodes = static_cast<int>(cfg.get_int("ode.discrete_episodes", 2000));
        dc.seeds = parse_seeds(cfg);
        dc.policy_floor = cfg.get_double("ode.policy_floor", 1e-3);
        dc.dt = dt;
        const auto cmp = discrete_vs_ode(dc);
        CsvWriter dw(disc);
        dw.row({"episode", "mean_x_l", "mean_x_r", "ode_x_l", "ode_x_r"});
        for (const auto& r : cmp.rows)
          dw.row({std::to_string(r.episode), csv_number(r.mean_x_l), csv_number(r.mean_x_r), csv_number(r.ode_x_l),
                  csv_number(r.ode_x_r)});
        rec.add("discrete:" + name, 0, "max_rel_deviation", cmp.max_rel_deviation);
        rec.add("discrete:" + name, 0, "dominance_agreement", cmp.dominance_agreement);
        rec.add("discrete:" + name, 0, "lock_in_fraction", cmp.lock_in_fraction);
        rec.add("discrete:" + name, 0, "seeds", static_cast<double>(dc.seeds.size()));
      }
  if (out_dir.empty()) return rec;
  std::ostringstream metrics, summary;
  write_metrics_csv(metrics, rec);
  write_summary_csv(summary, aggregate({rec}));
  for (const auto& [name, text] : std::vector<std::pair<std::string, std::string>>{
           {"ode_sweep.csv", sweep.str()}, {"ode_trajectory.csv", traj.str()}, {"discrete_vs_ode.csv", disc.str()},
           {"metrics.csv", metrics.str()}, {"summary.csv", summary.str()}}) {
    write_file(out_dir / name, text);
    rec.artifacts.push_back(name);
  }
  write_manifest(out_dir, rec.experiment, cfg, rec.artifacts);
  return rec;
}

}  // namespace bebold
