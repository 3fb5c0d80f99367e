#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "bebold/core/rng.hpp"

namespace bebold {

/// Canonical hashable encoding of an environment state. All counting goes
/// through this type (or through ObsKey for exact-observation counting).
struct StateKey {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  friend constexpr bool operator==(const StateKey&, const StateKey&) = default;
  friend constexpr auto operator<=>(const StateKey&, const StateKey&) = default;
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const noexcept {
    return static_cast<std::size_t>(mix64(k.hi ^ mix64(k.lo)));
  }
};

/// Exact observation bytes, used where counts are keyed on raw inputs.
using ObsKey = std::string;

namespace key_tag {
inline constexpr std::uint64_t kCorridor = 1ULL << 56;
inline constexpr std::uint64_t kPose = 2ULL << 56;
}  // namespace key_tag

/// (corridor id, depth). The shared start state is corridor 0, depth 0.
constexpr StateKey corridor_key(std::uint32_t corridor, std::uint32_t depth) noexcept {
  return {key_tag::kCorridor, (static_cast<std::uint64_t>(corridor) << 32) | depth};
}

constexpr std::uint32_t corridor_of(const StateKey& k) noexcept {
  return static_cast<std::uint32_t>(k.lo >> 32);
}
constexpr std::uint32_t depth_of(const StateKey& k) noexcept {
  return static_cast<std::uint32_t>(k.lo & 0xffffffffULL);
}
constexpr bool is_corridor_key(const StateKey& k) noexcept {
  return (k.hi & (0xffULL << 56)) == key_tag::kCorridor;
}

/// (x, y, dir, door-open bitmask). Up to 56 doors.
constexpr StateKey pose_key(int x, int y, int dir, std::uint64_t door_mask) noexcept {
  return {key_tag::kPose | (door_mask & ((1ULL << 56) - 1)),
          static_cast<std::uint64_t>(static_cast<std::uint16_t>(x)) |
              (static_cast<std::uint64_t>(static_cast<std::uint16_t>(y)) << 16) |
              (static_cast<std::uint64_t>(dir & 3) << 32)};
}

constexpr int pose_x(const StateKey& k) noexcept { return static_cast<int>(k.lo & 0xffff); }
constexpr int pose_y(const StateKey& k) noexcept { return static_cast<int>((k.lo >> 16) & 0xffff); }
constexpr int pose_dir(const StateKey& k) noexcept { return static_cast<int>((k.lo >> 32) & 3); }
constexpr bool is_pose_key(const StateKey& k) noexcept {
  return (k.hi & (0xffULL << 56)) == key_tag::kPose;
}

}  // namespace bebold

template <>
struct std::hash<bebold::StateKey> : bebold::StateKeyHash {};
