#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>
#include <unordered_map>

#include "bebold/core/error.hpp"
#include "bebold/gridworlds/state_key.hpp"

namespace bebold {

enum class CountScope { kLifetime, kEpisodic };

/// Visitation counts keyed by state. Absent keys read as zero; present keys
/// always hold a strictly positive count.
template <typename Key = StateKey, typename Hash = std::hash<Key>>
class CountTable {
 public:
  using map_type = std::unordered_map<Key, std::uint64_t, Hash>;

  explicit CountTable(CountScope scope = CountScope::kLifetime) : scope_(scope) {}

  CountScope scope() const { return scope_; }

  /// Increments the count of `key` and returns the post-increment value.
  std::uint64_t record(const Key& key) {
    ++total_;
    return ++entries_[key];
  }

  /// Restores a count from a checkpoint. `n` must be positive.
  void restore(const Key& key, std::uint64_t n) {
    if (n == 0) throw Misuse("restored counts must be positive");
    auto& slot = entries_[key];
    total_ += n - slot;
    slot = n;
  }

  std::uint64_t count(const Key& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second;
  }

  /// Clears an episodic table. Lifetime tables are never reset during a run.
  void reset_episode() {
    if (scope_ != CountScope::kEpisodic)
      throw Misuse("reset_episode called on a lifetime count table");
    entries_.clear();
    total_ = 0;
  }

  /// Number of record() calls since construction (or the last episode reset).
  std::uint64_t total() const { return total_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  const map_type& entries() const { return entries_; }

 private:
  CountScope scope_;
  map_type entries_;
  std::uint64_t total_ = 0;
};

using StateCountTable = CountTable<StateKey, StateKeyHash>;
using ObsCountTable = CountTable<ObsKey>;

/// Text checkpoint of a lifetime state table: header, entry count, then one
/// `hi lo count` line per key (hex key halves), sorted by key.
inline void save_counts(std::ostream& os, const StateCountTable& t) {
  std::vector<std::pair<StateKey, std::uint64_t>> rows(t.begin(), t.end());
  std::sort(rows.begin(), rows.end());
  os << "bebold-counts 1\n" << rows.size() << ' ' << t.total() << '\n';
  for (const auto& [k, n] : rows) os << std::hex << k.hi << ' ' << k.lo << std::dec << ' ' << n << '\n';
}

inline StateCountTable load_counts(std::istream& is) {
  std::string magic;
  int version = 0;
  std::size_t n = 0;
  std::uint64_t total = 0;
  is >> magic >> version >> n >> total;
  if (magic != "bebold-counts" || version != 1) throw ConfigError("not a bebold-counts v1 checkpoint");
  StateCountTable t(CountScope::kLifetime);
  for (std::size_t i = 0; i < n; ++i) {
    StateKey k;
    std::uint64_t c = 0;
    is >> std::hex >> k.hi >> k.lo >> std::dec >> c;
    if (!is || c == 0) throw ConfigError("corrupt count checkpoint");
    t.restore(k, c);
  }
  if (t.total() != total) throw ConfigError("count checkpoint total mismatch");
  return t;
}

}  // namespace bebold
