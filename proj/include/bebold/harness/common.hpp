#pragma once

#include <cctype>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "bebold/agents/policy.hpp"
#include "bebold/agents/q_table.hpp"
#include "bebold/core/error.hpp"
#include "bebold/core/rng.hpp"
#include "bebold/harness/config.hpp"
#include "bebold/rewards/reward_engine.hpp"
#include "bebold/rnd/predictor_pair.hpp"

namespace bebold {

/// Every key any experiment reads. Config::check_known against this catches
/// misspelt keys instead of silently running defaults.
inline const std::set<std::string>& known_config_keys() {
  static const std::set<std::string> keys = {
      "seeds", "threads",
      "agent.policy", "agent.epsilon", "agent.temperature", "agent.floor", "agent.lr", "agent.gamma",
      "reward.alpha", "reward.train_per_step",
      "rnd.hidden", "rnd.output", "rnd.lr", "rnd.teacher_cache",
      "corridor.lengths", "corridor.episodes", "corridor.mode", "corridor.horizon", "corridor.rows",
      "multiroom.rooms", "multiroom.room_size", "multiroom.layout_seed", "multiroom.procedural",
      "multiroom.max_steps", "multiroom.view", "multiroom.steps", "multiroom.rows", "multiroom.checkpoints",
      "multiroom.save_checkpoints", "multiroom.heatmaps",
      "ablation.rows",
      "ir.source", "ir.steps", "ir.floor", "ir.rows",
      "ode.t_l", "ode.t_r", "ode.alpha", "ode.horizon", "ode.dt", "ode.discrete_episodes", "ode.policy_floor",
  };
  return keys;
}

/// A result row: criterion name plus `+erir` / `+clip` toggles, e.g.
/// "bebold-tab+erir" or "bebold-rnd+erir+clip". Absent toggles are off.
struct RowSpec {
  std::string name;
  RewardSpec reward;
};

inline RowSpec parse_row(const std::string& text, double alpha, bool train_per_step) {
  const auto parts = split(text, '+');
  if (parts.empty()) throw ConfigError("empty row spec");
  RowSpec r{text, {}};
  r.reward.criterion = parse_criterion(parts[0]);
  r.reward.erir = r.reward.clip = false;
  r.reward.alpha = alpha;
  r.reward.train_per_step = train_per_step;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (parts[i] == "erir")
      r.reward.erir = true;
    else if (parts[i] == "clip")
      r.reward.clip = true;
    else
      throw ConfigError("unknown row toggle '" + parts[i] + "' in '" + text + "' (expected erir or clip)");
  }
  return r;
}

inline std::vector<RowSpec> parse_rows(const Config& cfg, const std::string& key, const std::vector<std::string>& fallback) {
  const double alpha = cfg.get_double("reward.alpha", 0.1);
  const bool per_step = cfg.get_bool("reward.train_per_step", true);
  std::vector<RowSpec> rows;
  for (const auto& s : cfg.get_list(key, fallback)) rows.push_back(parse_row(s, alpha, per_step));
  if (rows.empty()) throw ConfigError("'" + key + "' lists no rows");
  return rows;
}

inline std::vector<std::uint64_t> parse_seeds(const Config& cfg) {
  std::vector<std::uint64_t> out;
  for (auto s : cfg.get_int_list("seeds", {1, 2, 3, 4})) {
    if (s < 0) throw ConfigError("seeds must be non-negative");
    out.push_back(static_cast<std::uint64_t>(s));
  }
  if (out.empty()) throw ConfigError("no seeds given");
  return out;
}

inline PolicySpec policy_from(const Config& cfg) {
  PolicySpec p;
  p.kind = parse_policy_kind(cfg.get("agent.policy", "proportional"));
  p.epsilon = cfg.get_double("agent.epsilon", 0.1);
  p.temperature = cfg.get_double("agent.temperature", 1.0);
  p.floor = cfg.get_double("agent.floor", 1e-3);
  p.validate();
  return p;
}

inline QTable qtable_from(const Config& cfg, double default_gamma) {
  return QTable(cfg.get_double("agent.lr", 0.01), cfg.get_double("agent.gamma", default_gamma));
}

inline std::optional<PredictorPair> predictor_from(const Config& cfg, const RewardSpec& spec, std::size_t input_dim,
                                                   std::uint64_t seed) {
  if (!uses_predictor(spec.criterion)) return std::nullopt;
  PredictorConfig pc;
  pc.input_dim = input_dim;
  pc.hidden = static_cast<std::size_t>(cfg.get_int("rnd.hidden", 64));
  pc.output_dim = static_cast<std::size_t>(cfg.get_int("rnd.output", 32));
  pc.learning_rate = cfg.get_double("rnd.lr", 1e-3);
  pc.seed = derive_seed(seed, "rnd");
  PredictorPair p(pc);
  p.set_teacher_cache(cfg.get_bool("rnd.teacher_cache", true));
  return p;
}

/// Runs job(i) for i in [0, n) on up to `threads` workers. Each job owns its
/// own state; results land in slot i, so output order never depends on
/// scheduling.
template <typename Result>
std::vector<Result> fan_out(std::size_t n, int threads, const std::function<Result(std::size_t)>& job) {
  std::vector<Result> results(n);
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = job(i);
    return results;
  }
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  std::size_t next = 0;
  std::mutex m;
  for (int t = 0; t < threads && t < static_cast<int>(n); ++t)
    pool.emplace_back([&] {
      while (true) {
        std::size_t i;
        {
          std::lock_guard lock(m);
          if (next >= n) return;
          i = next++;
        }
        try {
          results[i] = job(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

/// File-name-safe form of a row name.
inline std::string slug(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.') ? c : '_';
  return out;
}

}  // namespace bebold
