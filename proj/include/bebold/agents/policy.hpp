#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bebold/core/error.hpp"
#include "bebold/core/rng.hpp"

namespace bebold {

enum class PolicyKind { kProportional, kSoftmax, kEpsilonGreedy };

inline PolicyKind parse_policy_kind(std::string_view s) {
  if (s == "proportional") return PolicyKind::kProportional;
  if (s == "softmax") return PolicyKind::kSoftmax;
  if (s == "epsilon-greedy" || s == "egreedy") return PolicyKind::kEpsilonGreedy;
  throw ConfigError("unknown policy '" + std::string(s) + "' (expected proportional, softmax, epsilon-greedy)");
}

inline std::string_view policy_kind_name(PolicyKind k) {
  switch (k) {
    case PolicyKind::kProportional: return "proportional";
    case PolicyKind::kSoftmax: return "softmax";
    case PolicyKind::kEpsilonGreedy: return "epsilon-greedy";
  }
  return "?";
}

struct PolicySpec {
  PolicyKind kind = PolicyKind::kProportional;
  double epsilon = 0.1;      // epsilon-greedy only
  double temperature = 1.0;  // softmax only
  double floor = 1e-3;       // every action keeps at least floor / num_actions

  void validate() const {
    if (!(floor >= 0.0 && floor <= 1.0)) throw ConfigError("policy floor must be in [0, 1]");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must be in [0, 1]");
    if (!(temperature > 0.0)) throw ConfigError("temperature must be positive");
  }
};

/// Action distribution induced by the values at one state.
inline std::vector<double> action_distribution(std::span<const double> q, const PolicySpec& spec) {
  const std::size_t n = q.size();
  if (n == 0) throw InvalidAction("state has no actions");
  std::vector<double> p(n, 0.0);
  switch (spec.kind) {
    case PolicyKind::kProportional: {
      double sum = 0.0;
      for (std::size_t a = 0; a < n; ++a) sum += p[a] = std::max(q[a], 0.0);
      if (sum > 0.0)
        for (double& x : p) x /= sum;
      else
        std::fill(p.begin(), p.end(), 1.0 / n);
      break;
    }
    case PolicyKind::kSoftmax: {
      const double m = *std::max_element(q.begin(), q.end());
      double sum = 0.0;
      for (std::size_t a = 0; a < n; ++a) sum += p[a] = std::exp((q[a] - m) / spec.temperature);
      for (double& x : p) x /= sum;
      break;
    }
    case PolicyKind::kEpsilonGreedy: {
      const double m = *std::max_element(q.begin(), q.end());
      const auto ties = static_cast<double>(std::count(q.begin(), q.end(), m));
      for (std::size_t a = 0; a < n; ++a) p[a] = spec.epsilon / n + (q[a] == m ? (1.0 - spec.epsilon) / ties : 0.0);
      break;
    }
  }
  if (spec.floor > 0.0)
    for (double& x : p) x = (1.0 - spec.floor) * x + spec.floor / n;
  return p;
}

inline int sample_action(std::span<const double> q, const PolicySpec& spec, Rng& rng) {
  const auto p = action_distribution(q, spec);
  return static_cast<int>(rng.categorical(p));
}

}  // namespace bebold
