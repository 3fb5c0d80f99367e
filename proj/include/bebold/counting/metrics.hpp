#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "bebold/counting/count_table.hpp"
#include "bebold/gridworlds/corridor.hpp"
#include "bebold/gridworlds/multiroom.hpp"

namespace bebold {

/// Shannon entropy in bits of the distribution proportional to `weights`.
/// Zero weights contribute nothing; an all-zero vector has entropy 0.
inline double entropy_bits(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double w : weights) {
    if (w <= 0.0) continue;
    const double p = w / total;
    h -= p * std::log2(p);
  }
  return h;
}

/// Per-room entropy of the normalized visitation counts within each room.
/// Rooms whose states were never counted come back as nullopt.
/// `counts` is any range of (key, count) pairs, e.g. a CountTable.
template <typename Counts, typename Membership>
std::vector<std::optional<double>> room_entropy(const Counts& counts, Membership&& room_of,
                                                int num_rooms) {
  std::vector<std::vector<double>> per_room(static_cast<std::size_t>(num_rooms));
  for (const auto& [key, n] : counts) {
    const int r = room_of(key);
    if (r < 0 || r >= num_rooms) continue;
    per_room[static_cast<std::size_t>(r)].push_back(static_cast<double>(n));
  }
  std::vector<std::optional<double>> out(per_room.size());
  for (std::size_t r = 0; r < per_room.size(); ++r)
    if (!per_room[r].empty()) out[r] = entropy_bits(per_room[r]);
  return out;
}

/// Room entropies over multiroom pose keys. With `merge_directions` the
/// counts of the four headings at a cell (and all door states) are pooled, so
/// the per-room state space is the set of cell locations.
inline std::vector<std::optional<double>> multiroom_room_entropy(
    const StateCountTable& table, const MultiRoomWorld& world, bool merge_directions) {
  if (!merge_directions)
    return room_entropy(table, [&](const StateKey& k) { return world.room_of(pose_x(k), pose_y(k)); },
                        world.num_rooms());
  std::unordered_map<StateKey, std::uint64_t, StateKeyHash> pooled;
  for (const auto& [k, n] : table) pooled[pose_key(pose_x(k), pose_y(k), 0, 0)] += n;
  return room_entropy(pooled, [&](const StateKey& k) { return world.room_of(pose_x(k), pose_y(k)); },
                      world.num_rooms());
}

struct CorridorTotals {
  std::vector<double> totals;  // one per corridor, index 0 = corridor 1
  double entropy_bits = 0.0;

  double max_share() const {
    double t = 0.0, m = 0.0;
    for (double x : totals) {
      t += x;
      m = std::max(m, x);
    }
    return t > 0.0 ? m / t : 0.0;
  }
};

/// Summed lifetime counts per corridor (start state excluded) and the base-2
/// entropy of the normalized totals.
inline CorridorTotals corridor_totals(const StateCountTable& table, const CorridorWorld& world) {
  CorridorTotals out;
  out.totals.assign(static_cast<std::size_t>(world.num_corridors()), 0.0);
  for (const auto& [key, n] : table) {
    if (!is_corridor_key(key)) continue;
    const auto c = corridor_of(key);
    if (c == 0 || c > out.totals.size()) continue;
    out.totals[c - 1] += static_cast<double>(n);
  }
  out.entropy_bits = bebold::entropy_bits(out.totals);
  return out;
}

/// Per-cell real values over a width x height grid, row-major.
struct HeatmapGrid {
  int width = 0;
  int height = 0;
  std::vector<double> values;
  double normalizer = 1.0;
  /// False when the table was empty and the normalizer defaulted to 1.
  bool has_mass = false;

  double at(int x, int y) const { return values[static_cast<std::size_t>(y * width + x)]; }
  double& at(int x, int y) { return values[static_cast<std::size_t>(y * width + x)]; }

  double sum() const {
    double s = 0.0;
    for (double v : values)
      if (!std::isnan(v)) s += v;
    return s;
  }
};

/// Normalized visitation heatmap N(x, y) / Z, pooling headings and door states.
inline HeatmapGrid heatmap(const StateCountTable& table, const MultiRoomWorld& world) {
  HeatmapGrid g{world.width(), world.height(),
                std::vector<double>(static_cast<std::size_t>(world.width() * world.height()), 0.0)};
  double z = 0.0;
  for (const auto& [key, n] : table) {
    if (!is_pose_key(key)) continue;
    const int x = pose_x(key), y = pose_y(key);
    if (x < 0 || y < 0 || x >= g.width || y >= g.height) continue;
    g.at(x, y) += static_cast<double>(n);
    z += static_cast<double>(n);
  }
  g.has_mass = z > 0.0;
  g.normalizer = g.has_mass ? z : 1.0;
  for (double& v : g.values) v /= g.normalizer;
  return g;
}

/// CSV: a `width,height,Z` header row with its values, then one row per grid
/// row. Absent cells (NaN) are written as empty fields.
inline void write_heatmap_csv(std::ostream& os, const HeatmapGrid& g) {
  const auto old_precision = os.precision(17);
  os << "width,height,Z\r\n" << g.width << ',' << g.height << ',' << g.normalizer << "\r\n";
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      if (x) os << ',';
      const double v = g.at(x, y);
      if (!std::isnan(v)) os << v;
    }
    os << "\r\n";
  }
  os.precision(old_precision);
}

/// Plain-text PGM (P2). Values are scaled to [0, max_gray] by the grid's
/// maximum; absent (NaN) cells render as 0.
inline void write_heatmap_pgm(std::ostream& os, const HeatmapGrid& g, int max_gray = 255) {
  double hi = 0.0;
  for (double v : g.values)
    if (!std::isnan(v)) hi = std::max(hi, v);
  os << "P2\n# heatmap Z=" << g.normalizer << "\n" << g.width << ' ' << g.height << '\n' << max_gray << '\n';
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      const double v = g.at(x, y);
      const int level = (std::isnan(v) || hi <= 0.0) ? 0 : static_cast<int>(std::lround(v / hi * max_gray));
      os << (x ? " " : "") << level;
    }
    os << '\n';
  }
}

}  // namespace bebold
