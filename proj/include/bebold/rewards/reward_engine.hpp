#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bebold/core/error.hpp"
#include "bebold/counting/count_table.hpp"
#include "bebold/gridworlds/state_key.hpp"
#include "bebold/rnd/mlp.hpp"
#include "bebold/rnd/predictor_pair.hpp"

namespace bebold {

enum class Criterion { kCountBased, kBeboldTabular, kRndError, kBeboldRnd };

inline Criterion parse_criterion(std::string_view s) {
  if (s == "count") return Criterion::kCountBased;
  if (s == "bebold-tab") return Criterion::kBeboldTabular;
  if (s == "rnd") return Criterion::kRndError;
  if (s == "bebold-rnd") return Criterion::kBeboldRnd;
  throw ConfigError("unknown criterion '" + std::string(s) + "' (expected count, bebold-tab, rnd, bebold-rnd)");
}

inline std::string_view criterion_name(Criterion c) {
  switch (c) {
    case Criterion::kCountBased: return "count";
    case Criterion::kBeboldTabular: return "bebold-tab";
    case Criterion::kRndError: return "rnd";
    case Criterion::kBeboldRnd: return "bebold-rnd";
  }
  return "?";
}

inline bool uses_predictor(Criterion c) { return c == Criterion::kRndError || c == Criterion::kBeboldRnd; }

struct RewardSpec {
  Criterion criterion = Criterion::kBeboldTabular;
  bool erir = true;
  bool clip = true;
  double alpha = 0.1;
  // RND student training cadence: every transition, or one batch at episode end.
  bool train_per_step = true;
};

// Pure criterion math. Counts are post-increment values.

inline double ir_count_based(std::uint64_t n_next) {
  if (n_next == 0) throw Misuse("count-based IR needs the visit recorded first");
  return 1.0 / static_cast<double>(n_next);
}

inline double regulate(double raw, bool clip, bool erir, std::uint64_t episodic_next) {
  double r = clip ? std::max(raw, 0.0) : raw;
  if (erir && episodic_next != 1) r = 0.0;
  return r;
}

inline double ir_bebold_tabular(std::uint64_t n_prev, std::uint64_t n_next, bool clip, bool erir,
                                std::uint64_t episodic_next) {
  if (n_prev == 0 || n_next == 0) throw Misuse("BeBold IR needs both visits recorded first");
  const double raw = 1.0 / static_cast<double>(n_next) - 1.0 / static_cast<double>(n_prev);
  return regulate(raw, clip, erir, episodic_next);
}

inline double ir_bebold_rnd(double err_next, double err_prev, bool clip, bool erir, std::uint64_t episodic_next) {
  return regulate(err_next - err_prev, clip, erir, episodic_next);
}

inline double total_reward(double extrinsic, double alpha, double intrinsic) { return extrinsic + alpha * intrinsic; }

/// Exact byte image of an encoding; used as the episodic key for RND criteria.
inline ObsKey obs_key(const EncodedObs& obs) {
  ObsKey k(obs.size() * sizeof(double), '\0');
  if (!obs.empty()) std::memcpy(k.data(), obs.data(), k.size());
  return k;
}

struct Transition {
  StateKey s_prev;
  EncodedObs obs_prev;
  StateKey s_next;
  EncodedObs obs_next;
  double extrinsic = 0.0;
};

/// Stateful intrinsic-reward source bound to one agent loop. Lifetime state
/// counts are kept for every criterion (the harness reads them for
/// heatmaps); the criterion decides what the IR is computed from.
class RewardEngine {
 public:
  explicit RewardEngine(RewardSpec spec, std::optional<PredictorPair> predictor = std::nullopt)
      : spec_(spec), predictor_(std::move(predictor)) {
    if (!(spec_.alpha >= 0.0)) throw ConfigError("alpha must be >= 0");
    if (uses_predictor(spec_.criterion) && !predictor_)
      throw ConfigError(std::string(criterion_name(spec_.criterion)) + " needs a predictor pair");
  }

  const RewardSpec& spec() const { return spec_; }
  const StateCountTable& lifetime() const { return lifetime_; }
  StateCountTable& mutable_lifetime() { return lifetime_; }
  const StateCountTable& episodic() const { return episodic_; }
  const ObsCountTable& episodic_obs() const { return episodic_obs_; }
  const std::optional<PredictorPair>& predictor() const { return predictor_; }
  std::optional<PredictorPair>& mutable_predictor() { return predictor_; }

  /// Starts an episode at s0: episodic tables cleared, then s0 counted.
  void begin_episode(const StateKey& s0, const EncodedObs& obs0 = {}) {
    flush_training();
    episodic_.reset_episode();
    episodic_obs_.reset_episode();
    lifetime_.record(s0);
    episodic_.record(s0);
    if (uses_predictor(spec_.criterion)) episodic_obs_.record(obs_key(obs0));
  }

  /// Records the visit to s_next, then returns its intrinsic reward.
  double intrinsic(const Transition& t) {
    const std::uint64_t n_next = lifetime_.record(t.s_next);
    const std::uint64_t ne_next = episodic_.record(t.s_next);
    switch (spec_.criterion) {
      case Criterion::kCountBased: {
        const double r = ir_count_based(n_next);
        return spec_.erir && ne_next != 1 ? 0.0 : r;
      }
      case Criterion::kBeboldTabular:
        return ir_bebold_tabular(lifetime_.count(t.s_prev), n_next, spec_.clip, spec_.erir, ne_next);
      case Criterion::kRndError:
      case Criterion::kBeboldRnd: {
        const std::uint64_t neo = episodic_obs_.record(obs_key(t.obs_next));
        const bool bebold = spec_.criterion == Criterion::kBeboldRnd;
        // Errors are read before the student trains on obs_next.
        const double e_prev = bebold ? predictor_->prediction_error(t.obs_prev) : 0.0;
        double e_next;
        if (spec_.train_per_step) {
          e_next = predictor_->error_then_train(t.obs_next);
        } else {
          e_next = predictor_->prediction_error(t.obs_next);
          pending_.push_back(t.obs_next);
        }
        double r;
        if (bebold)
          r = ir_bebold_rnd(e_next, e_prev, spec_.clip, spec_.erir, neo);
        else
          r = spec_.erir && neo != 1 ? 0.0 : e_next;
        return r;
      }
    }
    return 0.0;
  }

  double total(const Transition& t) { return total_reward(t.extrinsic, spec_.alpha, intrinsic(t)); }

  /// Trains on transitions buffered under per-episode cadence.
  void flush_training() {
    if (pending_.empty()) return;
    predictor_->train_step(pending_);
    pending_.clear();
  }

 private:
  RewardSpec spec_;
  StateCountTable lifetime_{CountScope::kLifetime};
  StateCountTable episodic_{CountScope::kEpisodic};
  ObsCountTable episodic_obs_{CountScope::kEpisodic};
  std::optional<PredictorPair> predictor_;
  std::vector<EncodedObs> pending_;
};

}  // namespace bebold
