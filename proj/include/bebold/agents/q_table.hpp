#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bebold/core/error.hpp"
#include "bebold/gridworlds/state_key.hpp"

namespace bebold {

/// Tabular action values. Absent entries read as zero.
class QTable {
 public:
  QTable() = default;
  QTable(double learning_rate, double discount) : learning_rate_(learning_rate), discount_(discount) {
    if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw ConfigError("Q learning rate must be in (0, 1]");
    if (!(discount >= 0.0 && discount <= 1.0)) throw ConfigError("discount must be in [0, 1]");
  }

  double learning_rate() const { return learning_rate_; }
  double discount() const { return discount_; }
  std::size_t size() const { return table_.size(); }
  const auto& entries() const { return table_; }

  double get(const StateKey& s, int a) const {
    const auto it = table_.find(s);
    if (it == table_.end() || a >= static_cast<int>(it->second.size())) return 0.0;
    return it->second[a];
  }

  /// Values for actions [0, num_actions) at s, zero-filled.
  std::vector<double> values(const StateKey& s, int num_actions) const {
    std::vector<double> v(num_actions, 0.0);
    const auto it = table_.find(s);
    if (it != table_.end())
      for (int a = 0; a < num_actions && a < static_cast<int>(it->second.size()); ++a) v[a] = it->second[a];
    return v;
  }

  double max_value(const StateKey& s, int num_actions) const {
    const auto v = values(s, num_actions);
    return *std::max_element(v.begin(), v.end());
  }

  void set(const StateKey& s, int a, double v) {
    if (!std::isfinite(v)) throw DomainError("non-finite Q value");
    auto& row = table_[s];
    if (a >= static_cast<int>(row.size())) row.resize(a + 1, 0.0);
    row[a] = v;
  }

  friend bool operator==(const QTable&, const QTable&) = default;

  /// Text checkpoint: header, then one line per (state, action) with the key
  /// halves in hex and the value in hexfloat. Rows are sorted by key.
  void save(std::ostream& os) const {
    std::vector<StateKey> keys;
    for (const auto& [k, _] : table_) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    os << "bebold-qtable 1\n" << std::hexfloat << learning_rate_ << ' ' << discount_ << '\n' << keys.size() << '\n';
    for (const auto& k : keys) {
      const auto& row = table_.at(k);
      os << std::hex << k.hi << ' ' << k.lo << std::dec << ' ' << row.size();
      for (double v : row) os << ' ' << v;
      os << '\n';
    }
    os << std::defaultfloat;
  }

  static QTable load(std::istream& is) {
    std::string magic, lr, g;
    int version = 0;
    is >> magic >> version >> lr >> g;
    if (magic != "bebold-qtable" || version != 1) throw ConfigError("not a bebold-qtable v1 checkpoint");
    QTable q(std::strtod(lr.c_str(), nullptr), std::strtod(g.c_str(), nullptr));
    std::size_t n = 0;
    is >> n;
    for (std::size_t i = 0; i < n; ++i) {
      StateKey k;
      std::size_t m = 0;
      is >> std::hex >> k.hi >> k.lo >> std::dec >> m;
      auto& row = q.table_[k];
      row.resize(m);
      for (double& v : row) {
        std::string tok;
        is >> tok;
        v = std::strtod(tok.c_str(), nullptr);
      }
    }
    if (!is) throw ConfigError("truncated Q-table checkpoint");
    return q;
  }

 private:
  double learning_rate_ = 0.01;
  double discount_ = 1.0;
  std::unordered_map<StateKey, std::vector<double>, StateKeyHash> table_;
};

/// Exponential moving average toward an episode return.
inline double bandit_update(QTable& q, const StateKey& s, int a, double episode_return) {
  const double alpha = q.learning_rate();
  const double v = (1.0 - alpha) * q.get(s, a) + alpha * episode_return;
  q.set(s, a, v);
  return v;
}

/// One-step max-backup Q-learning.
inline double td_update(QTable& q, const StateKey& s, int a, double reward, const StateKey& s_next, bool done,
                        int num_actions_next) {
  const double target = reward + (done ? 0.0 : q.discount() * q.max_value(s_next, num_actions_next));
  const double old = q.get(s, a);
  const double v = old + q.learning_rate() * (target - old);
  q.set(s, a, v);
  return v;
}

}  // namespace bebold
