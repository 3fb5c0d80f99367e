#pragma once

#include <map>
#include <string>
#include <vector>

#include "bebold/core/error.hpp"
#include "bebold/harness/config.hpp"

namespace bebold {

// Corridor: moving-average bandit at s0 over a fixed 40-move horizon (the
// walker waits at the corridor end), softmax choice. Rows without "+clip"
// run BeBold unclipped.
inline constexpr const char* kCorridorPreset = R"(
seeds = 1,2,3,4,5,6,7,8
corridor.lengths = 40,10,30,10
corridor.episodes = 3000
corridor.mode = bandit
corridor.horizon = 40
corridor.rows = count,bebold-tab+erir,rnd,bebold-rnd+erir
agent.policy = softmax
agent.temperature = 0.007
agent.floor = 0
agent.lr = 0.0005
agent.gamma = 1
reward.alpha = 1
)";

inline constexpr const char* kMultiRoomPreset = R"(
seeds = 1,2,3,4
multiroom.rooms = 4
multiroom.room_size = 5
multiroom.layout_seed = 0
multiroom.view = 5
multiroom.steps = 600000
multiroom.checkpoints = 10
multiroom.rows = bebold-rnd+erir+clip,rnd
agent.policy = epsilon-greedy
agent.epsilon = 0.1
agent.floor = 0
agent.lr = 0.1
agent.gamma = 0.99
reward.alpha = 0.1
)";

inline std::map<std::string, std::string> preset_texts() {
  std::map<std::string, std::string> p;
  p["corridor"] = kCorridorPreset;
  p["corridor-600"] = std::string(kCorridorPreset) + "corridor.episodes = 600\n";
  // Proportional choice with alpha_Q = 0.01 and no horizon padding.
  p["corridor-proportional"] = std::string(kCorridorPreset) +
                           "corridor.horizon = 0\nagent.policy = proportional\nagent.floor = 0.001\nagent.lr = 0.01\n";
  p["corridor-stepwise"] = std::string(kCorridorPreset) +
                           "corridor.mode = stepwise\ncorridor.horizon = 80\ncorridor.rows = count,bebold-tab+erir\n"
                           "agent.policy = epsilon-greedy\nagent.epsilon = 0.1\nagent.lr = 0.1\nagent.gamma = 0.99\n";
  p["multiroom"] = kMultiRoomPreset;
  p["ablation"] = kMultiRoomPreset;
  p["ir-heatmap"] = std::string(kMultiRoomPreset) + "ir.steps = 2000\nir.floor = 0.05\n";
  p["ode"] = R"(
seeds = 1,2,3,4,5,6,7,8,9,10
ode.t_l = 40
ode.t_r = 10
ode.alpha = 0.01
ode.horizon = 5000
ode.dt = 0.1
ode.discrete_episodes = 2000
ode.policy_floor = 0.001
)";
  return p;
}

inline std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [k, _] : preset_texts()) out.push_back(k);
  return out;
}

inline Config preset(const std::string& name) {
  const auto all = preset_texts();
  const auto it = all.find(name);
  if (it == all.end()) {
    std::string known;
    for (const auto& [k, _] : all) known += (known.empty() ? "" : ", ") + k;
    throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
  }
  return Config::parse(it->second, "preset " + name);
}

}  // namespace bebold
