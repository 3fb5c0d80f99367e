#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "bebold/agents/episode.hpp"
#include "bebold/core/rng.hpp"
#include "bebold/dynamics/ode.hpp"
#include "bebold/gridworlds/corridor.hpp"
#include "bebold/rewards/reward_engine.hpp"

namespace bebold {

struct DiscreteConfig {
  OdeParams ode;
  int episodes = 1000;  // after the two initial forced walks
  std::vector<std::uint64_t> seeds;
  double policy_floor = 1e-3;
  double dt = 0.1;
};

struct DiscreteRow {
  int episode = 0;
  double mean_x_l = 0.0;
  double mean_x_r = 0.0;
  double ode_x_l = 0.0;
  double ode_x_r = 0.0;
};

struct DiscreteComparison {
  std::vector<DiscreteRow> rows;
  Crossing crossing;
  double max_rel_deviation = 0.0;
  // Fraction of episodes before the ODE crossing where the discrete mean and
  // the ODE agree on the leading corridor (ties in either count as agreement).
  double dominance_agreement = 0.0;
  // Seeds whose larger corridor got more than half of all episodes.
  double lock_in_fraction = 0.0;
};

/// Monte-Carlo runs of the moving-average bandit agent on a two-corridor
/// world under count-based IR, compared with the ODE. Each run starts by
/// walking each corridor once so that x_l(0) = x_r(0) = 1 as in the ODE.
inline DiscreteComparison discrete_vs_ode(const DiscreteConfig& cfg) {
  if (cfg.seeds.empty()) throw ConfigError("discrete_vs_ode needs at least one seed");
  if (cfg.episodes < 1) throw ConfigError("discrete_vs_ode needs at least one episode");
  const auto tl = static_cast<int>(std::lround(cfg.ode.t_l));
  const auto trr = static_cast<int>(std::lround(cfg.ode.t_r));
  if (tl != cfg.ode.t_l || trr != cfg.ode.t_r) throw ConfigError("discrete runs need integer corridor lengths");
  const CorridorWorld world({tl, trr});

  std::vector<double> sum_l(cfg.episodes + 1, 0.0), sum_r(cfg.episodes + 1, 0.0);
  int locked = 0;
  for (const auto seed : cfg.seeds) {
    Agent agent{QTable(cfg.ode.alpha, 1.0), PolicySpec{PolicyKind::kProportional, 0.0, 1.0, cfg.policy_floor}};
    RewardEngine engine(RewardSpec{Criterion::kCountBased, false, false, 1.0});
    Rng rng(derive_seed(seed, "discrete-vs-ode"));
    run_corridor_bandit_episode(agent, world, engine, rng, 1);
    run_corridor_bandit_episode(agent, world, engine, rng, 2);
    double xl = 1, xr = 1;
    sum_l[0] += xl;
    sum_r[0] += xr;
    for (int e = 1; e <= cfg.episodes; ++e) {
      const auto rec = run_corridor_bandit_episode(agent, world, engine, rng);
      (rec.action == 1 ? xl : xr) += 1;
      sum_l[e] += xl;
      sum_r[e] += xr;
    }
    if (std::max(xl, xr) > 0.5 * (xl + xr)) ++locked;
  }

  DiscreteComparison out;
  const Trajectory tr = integrate(cfg.ode, {}, cfg.episodes, cfg.dt);
  if (!tr.ok) throw DomainError(tr.error);
  out.crossing = crossing_point(tr, cfg.ode);
  const double n = static_cast<double>(cfg.seeds.size());
  int before = 0, agree = 0;
  for (int e = 0; e <= cfg.episodes; ++e) {
    const OdeState s = sample_at(tr, e);
    DiscreteRow row{e, sum_l[e] / n, sum_r[e] / n, s.x_l, s.x_r};
    out.max_rel_deviation = std::max({out.max_rel_deviation, std::abs(row.mean_x_l - row.ode_x_l) / row.ode_x_l,
                                      std::abs(row.mean_x_r - row.ode_x_r) / row.ode_x_r});
    const bool pre_cross = out.crossing.status != CrossingStatus::kFound || e < out.crossing.t;
    if (e > 0 && pre_cross) {
      ++before;
      const double d = row.mean_x_l - row.mean_x_r, o = row.ode_x_l - row.ode_x_r;
      if (d == 0.0 || o == 0.0 || (d > 0) == (o > 0)) ++agree;
    }
    out.rows.push_back(row);
  }
  out.dominance_agreement = before ? static_cast<double>(agree) / before : 1.0;
  out.lock_in_fraction = locked / n;
  return out;
}

}  // namespace bebold
