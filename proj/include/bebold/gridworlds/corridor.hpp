#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "bebold/core/error.hpp"
#include "bebold/gridworlds/state_key.hpp"

namespace bebold {

enum class CorridorMode {
  /// One decision at the start state, then a forced walk down the corridor.
  kBandit,
  /// Per-step decisions along a chain: forward/back inside a corridor.
  kStepwise,
};

/// M disjoint corridors hanging off one shared start state s0.
///
/// In bandit mode an episode is the deterministic walk s0, s_1, ..., s_T of the
/// chosen corridor. With `horizon` > 0 the episode instead lasts exactly
/// `horizon` moves and the walker stays in the corridor's end state once it
/// gets there, so every episode spends the same amount of time in the corridor
/// it picked regardless of that corridor's length.
///
/// In stepwise mode the agent acts every step: at s0 it picks a corridor, inside
/// a corridor action 0 moves deeper (staying put at the end) and action 1 moves
/// back (depth 1 returns to s0). Episodes last `horizon` steps.
class CorridorWorld {
 public:
  CorridorWorld(std::vector<int> lengths, CorridorMode mode = CorridorMode::kBandit,
                int horizon = 0)
      : lengths_(std::move(lengths)), mode_(mode), horizon_(horizon) {
    if (lengths_.empty()) throw ConfigError("corridor world needs at least one corridor");
    for (int t : lengths_)
      if (t <= 0) throw ConfigError("corridor lengths must be positive");
    if (horizon_ < 0) throw ConfigError("corridor horizon must be non-negative");
    if (mode_ == CorridorMode::kStepwise && horizon_ == 0)
      horizon_ = 2 * *std::max_element(lengths_.begin(), lengths_.end());
    offsets_.resize(lengths_.size());
    std::size_t acc = 1;
    for (std::size_t j = 0; j < lengths_.size(); ++j) {
      offsets_[j] = acc;
      acc += static_cast<std::size_t>(lengths_[j]);
    }
    total_states_ = acc;
  }

  int num_corridors() const { return static_cast<int>(lengths_.size()); }
  const std::vector<int>& lengths() const { return lengths_; }
  int length(int corridor) const { return lengths_.at(static_cast<std::size_t>(corridor - 1)); }
  CorridorMode mode() const { return mode_; }
  int horizon() const { return horizon_; }

  /// 1 + sum of lengths.
  std::size_t total_states() const { return total_states_; }

  static constexpr StateKey start_key() { return corridor_key(0, 0); }

  /// Dense index in [0, total_states): s0 is 0, corridors follow in order.
  std::size_t state_index(const StateKey& key) const {
    const auto c = corridor_of(key);
    if (c == 0) return 0;
    return offsets_.at(c - 1) + depth_of(key) - 1;
  }

  StateKey key_at(std::size_t index) const {
    if (index == 0) return start_key();
    for (std::size_t j = lengths_.size(); j-- > 0;)
      if (index >= offsets_[j])
        return corridor_key(static_cast<std::uint32_t>(j + 1),
                            static_cast<std::uint32_t>(index - offsets_[j] + 1));
    throw InvalidAction("state index out of range");
  }

  /// Full walk for a bandit-mode episode choosing `corridor` (1-based).
  std::vector<StateKey> corridor_episode(int corridor) const {
    if (mode_ != CorridorMode::kBandit) throw Misuse("corridor_episode requires bandit mode");
    check_corridor(corridor);
    const int len = length(corridor);
    const int moves = std::max(len, horizon_);
    std::vector<StateKey> walk;
    walk.reserve(static_cast<std::size_t>(moves) + 1);
    walk.push_back(start_key());
    for (int m = 1; m <= moves; ++m)
      walk.push_back(corridor_key(static_cast<std::uint32_t>(corridor),
                                  static_cast<std::uint32_t>(std::min(m, len))));
    return walk;
  }

  // Stepwise interface -------------------------------------------------------

  int num_actions(const StateKey& key) const {
    return corridor_of(key) == 0 ? num_corridors() : 2;
  }

  StateKey reset() {
    require_stepwise();
    current_ = start_key();
    steps_ = 0;
    done_ = false;
    return current_;
  }

  struct Step {
    StateKey key;
    bool done;
  };

  Step step(int action) {
    require_stepwise();
    if (done_) throw EpisodeFinished("corridor episode finished; call reset()");
    if (action < 0 || action >= num_actions(current_))
      throw InvalidAction("corridor action " + std::to_string(action) + " out of range");
    const auto c = corridor_of(current_);
    const auto d = depth_of(current_);
    if (c == 0) {
      current_ = corridor_key(static_cast<std::uint32_t>(action + 1), 1);
    } else if (action == 0) {
      current_ = corridor_key(c, std::min<std::uint32_t>(d + 1, static_cast<std::uint32_t>(length(static_cast<int>(c)))));
    } else {
      current_ = d == 1 ? start_key() : corridor_key(c, d - 1);
    }
    done_ = ++steps_ >= horizon_;
    return {current_, done_};
  }

  StateKey current() const { return current_; }
  bool done() const { return done_; }

 private:
  void check_corridor(int corridor) const {
    if (corridor < 1 || corridor > num_corridors())
      throw InvalidAction("corridor " + std::to_string(corridor) + " not in [1, " +
                          std::to_string(num_corridors()) + "]");
  }
  void require_stepwise() const {
    if (mode_ != CorridorMode::kStepwise) throw Misuse("per-step interface requires stepwise mode");
  }

  std::vector<int> lengths_;
  CorridorMode mode_;
  int horizon_;
  std::vector<std::size_t> offsets_;
  std::size_t total_states_ = 0;

  StateKey current_ = start_key();
  int steps_ = 0;
  bool done_ = false;
};

}  // namespace bebold
