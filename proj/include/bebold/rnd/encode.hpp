#pragma once

#include <cstddef>
#include <vector>

#include "bebold/core/error.hpp"
#include "bebold/gridworlds/corridor.hpp"
#include "bebold/gridworlds/multiroom.hpp"
#include "bebold/rnd/mlp.hpp"

namespace bebold {

inline EncodedObs one_hot(std::size_t index, std::size_t dim) {
  if (index >= dim) throw ShapeError("one-hot index out of range");
  EncodedObs v(dim, 0.0);
  v[index] = 1.0;
  return v;
}

/// Corridor states: one-hot over the global state index (s0 first).
inline EncodedObs encode(const CorridorWorld& world, const StateKey& key) {
  return one_hot(world.state_index(key), world.total_states());
}

inline std::size_t encoded_dim(const CorridorWorld& world) { return world.total_states(); }

/// Multi-room views: one-hot block of kNumCellCodes per patch cell.
inline EncodedObs encode(const Observation& obs) {
  EncodedObs v(obs.grid_patch.size() * kNumCellCodes, 0.0);
  for (std::size_t k = 0; k < obs.grid_patch.size(); ++k)
    v[k * kNumCellCodes + static_cast<std::size_t>(obs.grid_patch[k])] = 1.0;
  return v;
}

inline std::size_t encoded_dim(const MultiRoomWorld& world) {
  return static_cast<std::size_t>(world.view_size()) * world.view_size() * kNumCellCodes;
}

}  // namespace bebold
