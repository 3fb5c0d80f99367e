#pragma once

#include <cstdint>
#include <vector>

#include "bebold/agents/policy.hpp"
#include "bebold/agents/q_table.hpp"
#include "bebold/core/rng.hpp"
#include "bebold/gridworlds/corridor.hpp"
#include "bebold/gridworlds/multiroom.hpp"
#include "bebold/rewards/reward_engine.hpp"
#include "bebold/rnd/encode.hpp"

namespace bebold {

struct Agent {
  QTable q;
  PolicySpec policy;
};

/// What one episode produced. `intrinsic` holds the per-step IR stream.
struct EpisodeRecord {
  int action = -1;  // bandit mode: chosen corridor (1-based)
  int steps = 0;
  std::vector<double> intrinsic;
  double extrinsic_return = 0.0;
  double total_return = 0.0;
  bool reached_goal = false;
  int deepest_room = 0;
};

/// Bandit-mode corridor episode: one choice at s0, forced walk, then an
/// exponential-moving-average update of Q(s0, choice) toward the return.
/// `forced` (1-based) overrides the policy.
inline EpisodeRecord run_corridor_bandit_episode(Agent& agent, const CorridorWorld& world, RewardEngine& engine,
                                                 Rng& rng, int forced = 0) {
  const StateKey s0 = CorridorWorld::start_key();
  const bool enc = uses_predictor(engine.spec().criterion);
  EpisodeRecord rec;
  if (forced > 0) {
    rec.action = forced;
  } else {
    const auto qv = agent.q.values(s0, world.num_corridors());
    rec.action = sample_action(qv, agent.policy, rng) + 1;
  }
  const auto walk = world.corridor_episode(rec.action);
  Transition t;
  t.s_next = s0;
  if (enc) t.obs_next = encode(world, s0);
  engine.begin_episode(s0, t.obs_next);
  for (std::size_t k = 1; k < walk.size(); ++k) {
    t.s_prev = t.s_next;
    t.obs_prev = std::move(t.obs_next);
    t.s_next = walk[k];
    if (enc) t.obs_next = encode(world, walk[k]);
    const double ir = engine.intrinsic(t);
    rec.intrinsic.push_back(ir);
    rec.total_return += total_reward(0.0, engine.spec().alpha, ir);
  }
  rec.steps = static_cast<int>(walk.size()) - 1;
  bandit_update(agent.q, s0, rec.action - 1, rec.total_return);
  return rec;
}

/// Stepwise corridor episode with one TD update per step.
inline EpisodeRecord run_corridor_stepwise_episode(Agent& agent, CorridorWorld& world, RewardEngine& engine,
                                                   Rng& rng) {
  const bool enc = uses_predictor(engine.spec().criterion);
  EpisodeRecord rec;
  Transition t;
  t.s_next = world.reset();
  if (enc) t.obs_next = encode(world, t.s_next);
  engine.begin_episode(t.s_next, t.obs_next);
  for (bool done = false; !done;) {
    const StateKey s = t.s_next;
    const int na = world.num_actions(s);
    const int a = sample_action(agent.q.values(s, na), agent.policy, rng);
    const auto st = world.step(a);
    done = st.done;
    t.s_prev = s;
    t.obs_prev = std::move(t.obs_next);
    t.s_next = st.key;
    if (enc) t.obs_next = encode(world, st.key);
    const double ir = engine.intrinsic(t);
    const double r = total_reward(0.0, engine.spec().alpha, ir);
    rec.intrinsic.push_back(ir);
    rec.total_return += r;
    // The horizon is a time limit, not a terminal state: keep bootstrapping.
    td_update(agent.q, s, a, r, st.key, false, world.num_actions(st.key));
    ++rec.steps;
  }
  return rec;
}

/// Multi-room episode with one TD update per step. IR is computed from the
/// pose key (tabular criteria) or the encoded egocentric view (RND criteria).
/// With `learn` false the Q-table is left untouched (frozen-policy rollouts).
/// A positive `step_limit` cuts the episode short after that many steps.
inline EpisodeRecord run_multiroom_episode(Agent& agent, MultiRoomWorld& world, RewardEngine& engine, Rng& rng,
                                           std::uint64_t episode_seed, bool learn = true,
                                           std::vector<std::pair<StateKey, double>>* trace = nullptr,
                                           int step_limit = 0) {
  const bool enc = uses_predictor(engine.spec().criterion);
  EpisodeRecord rec;
  Transition t;
  const Observation o0 = world.reset(episode_seed);
  t.s_next = world.state_key();
  if (enc) t.obs_next = encode(o0);
  engine.begin_episode(t.s_next, t.obs_next);
  for (bool done = false; !done;) {
    const StateKey s = t.s_next;
    const int a = sample_action(agent.q.values(s, kNumMultiRoomActions), agent.policy, rng);
    const StepResult st = world.step(a);
    done = st.done;
    t.s_prev = s;
    t.obs_prev = std::move(t.obs_next);
    t.s_next = world.state_key();
    if (enc) t.obs_next = encode(st.observation);
    t.extrinsic = st.extrinsic_reward;
    const double ir = engine.intrinsic(t);
    const double r = total_reward(t.extrinsic, engine.spec().alpha, ir);
    rec.intrinsic.push_back(ir);
    rec.extrinsic_return += t.extrinsic;
    rec.total_return += r;
    if (trace) trace->emplace_back(t.s_next, ir);
    const bool goal = st.extrinsic_reward > 0.0;
    rec.reached_goal = rec.reached_goal || goal;
    rec.deepest_room = std::max(rec.deepest_room, st.info.room);
    // Only reaching the goal is terminal; running out of steps is truncation.
    if (learn) td_update(agent.q, s, a, r, t.s_next, goal, kNumMultiRoomActions);
    ++rec.steps;
    if (step_limit > 0 && rec.steps >= step_limit) break;
  }
  return rec;
}

}  // namespace bebold
