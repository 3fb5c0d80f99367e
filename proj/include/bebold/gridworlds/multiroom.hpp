#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bebold/core/error.hpp"
#include "bebold/core/rng.hpp"
#include "bebold/gridworlds/state_key.hpp"

namespace bebold {

enum class Cell : std::uint8_t {
  kUnseen = 0,
  kFloor = 1,
  kWall = 2,
  kClosedDoor = 3,
  kOpenDoor = 4,
  kGoal = 5,
};
inline constexpr int kNumCellCodes = 6;

enum class Action : int { kTurnLeft = 0, kTurnRight = 1, kForward = 2, kToggle = 3 };
inline constexpr int kNumMultiRoomActions = 4;

/// Direction 0 = east (+x), 1 = south (+y), 2 = west, 3 = north.
struct AgentPose {
  int x = 0;
  int y = 0;
  int dir = 0;

  friend constexpr bool operator==(const AgentPose&, const AgentPose&) = default;
};

inline constexpr std::array<int, 4> kDirDx{1, 0, -1, 0};
inline constexpr std::array<int, 4> kDirDy{0, 1, 0, -1};

/// Egocentric view_size x view_size patch, row-major. The agent sits at the
/// bottom-centre cell facing "up" the patch.
struct Observation {
  int view_size = 0;
  std::vector<Cell> grid_patch;

  Cell at(int row, int col) const {
    return grid_patch[static_cast<std::size_t>(row * view_size + col)];
  }

  /// Exact bytes of the patch, usable as a hash-table key.
  ObsKey key() const {
    ObsKey k(grid_patch.size(), '\0');
    for (std::size_t i = 0; i < grid_patch.size(); ++i)
      k[i] = static_cast<char>(grid_patch[i]);
    return k;
  }

  friend bool operator==(const Observation&, const Observation&) = default;
};

struct StepInfo {
  AgentPose pose;
  int room = 0;
};

struct StepResult {
  Observation observation;
  double extrinsic_reward = 0.0;
  bool done = false;
  StepInfo info;
};

struct MultiRoomConfig {
  int num_rooms = 4;
  int room_size = 5;
  std::uint64_t layout_seed = 0;
  /// Resample the layout from the episode seed at every reset.
  bool procedural = false;
  /// 0 selects 20 * room_size * num_rooms.
  int max_steps = 0;
  int view_size = 5;
};

/// Rooms of side room_size laid left to right, consecutive rooms sharing a
/// wall with exactly one door in it. Doors start closed and open with toggle.
/// The agent starts in the first room and the goal sits in the last one.
class MultiRoomWorld {
 public:
  explicit MultiRoomWorld(MultiRoomConfig config) : cfg_(config) {
    if (cfg_.num_rooms < 1) throw ConfigError("num_rooms must be positive");
    if (cfg_.room_size < 2) throw ConfigError("room_size must be at least 2");
    if (cfg_.view_size < 3 || cfg_.view_size % 2 == 0)
      throw ConfigError("view_size must be an odd integer >= 3");
    if (cfg_.num_rooms - 1 > 56) throw ConfigError("at most 57 rooms supported");
    if (cfg_.max_steps == 0) cfg_.max_steps = 20 * cfg_.room_size * cfg_.num_rooms;
    if (cfg_.max_steps < 0) throw ConfigError("max_steps must be positive");
    width_ = cfg_.num_rooms * (cfg_.room_size + 1) + 1;
    height_ = cfg_.room_size + 2;
    generate(cfg_.layout_seed);
    reset(0);
  }

  const MultiRoomConfig& config() const { return cfg_; }
  int width() const { return width_; }
  int height() const { return height_; }
  int num_rooms() const { return cfg_.num_rooms; }
  int max_steps() const { return cfg_.max_steps; }
  int view_size() const { return cfg_.view_size; }

  Cell cell(int x, int y) const {
    if (!in_bounds(x, y)) return Cell::kWall;
    return grid_[index(x, y)];
  }

  /// Overwrites one cell. Meant for tests and scripted scenarios.
  void set_cell(int x, int y, Cell c) {
    if (!in_bounds(x, y)) throw InvalidAction("set_cell out of bounds");
    grid_[index(x, y)] = c;
  }

  /// Room containing column x. Door cells belong to the room on their left.
  int room_of(int x, int /*y*/ = 0) const {
    if (x <= 0) return 0;
    const int r = (x - 1) / (cfg_.room_size + 1);
    return r >= cfg_.num_rooms ? cfg_.num_rooms - 1 : r;
  }

  const AgentPose& pose() const { return pose_; }
  int steps_taken() const { return steps_; }
  bool done() const { return done_; }
  std::uint64_t door_mask() const { return door_mask_; }
  const std::vector<std::pair<int, int>>& doors() const { return doors_; }
  std::pair<int, int> goal() const { return goal_; }
  AgentPose start_pose() const { return start_; }

  Observation reset(std::uint64_t episode_seed) {
    if (cfg_.procedural) generate(derive_seed(cfg_.layout_seed, "episode-layout", episode_seed));
    for (auto [x, y] : doors_) grid_[index(x, y)] = Cell::kClosedDoor;
    door_mask_ = 0;
    pose_ = start_;
    steps_ = 0;
    done_ = false;
    return observe();
  }

  StepResult step(Action action) {
    if (done_) throw EpisodeFinished("multiroom episode finished; call reset()");
    ++steps_;
    double reward = 0.0;
    switch (action) {
      case Action::kTurnLeft:
        pose_.dir = (pose_.dir + 3) % 4;
        break;
      case Action::kTurnRight:
        pose_.dir = (pose_.dir + 1) % 4;
        break;
      case Action::kForward: {
        const int fx = pose_.x + kDirDx[static_cast<std::size_t>(pose_.dir)];
        const int fy = pose_.y + kDirDy[static_cast<std::size_t>(pose_.dir)];
        const Cell c = cell(fx, fy);
        if (c == Cell::kFloor || c == Cell::kOpenDoor || c == Cell::kGoal) {
          pose_.x = fx;
          pose_.y = fy;
        }
        if (c == Cell::kGoal) {
          reward = 1.0 - 0.9 * (static_cast<double>(steps_) / cfg_.max_steps);
          done_ = true;
        }
        break;
      }
      case Action::kToggle: {
        const int fx = pose_.x + kDirDx[static_cast<std::size_t>(pose_.dir)];
        const int fy = pose_.y + kDirDy[static_cast<std::size_t>(pose_.dir)];
        if (cell(fx, fy) == Cell::kClosedDoor) {
          grid_[index(fx, fy)] = Cell::kOpenDoor;
          for (std::size_t d = 0; d < doors_.size(); ++d)
            if (doors_[d] == std::pair{fx, fy}) door_mask_ |= 1ULL << d;
        }
        break;
      }
      default:
        throw InvalidAction("multiroom action " + std::to_string(static_cast<int>(action)) +
                            " out of range");
    }
    if (!done_ && steps_ >= cfg_.max_steps) done_ = true;
    return {observe(), reward, done_, {pose_, room_of(pose_.x, pose_.y)}};
  }

  StepResult step(int action) {
    if (action < 0 || action >= kNumMultiRoomActions)
      throw InvalidAction("multiroom action " + std::to_string(action) + " out of range");
    return step(static_cast<Action>(action));
  }

  StateKey state_key() const { return state_key(pose_, door_mask_); }
  static StateKey state_key(const AgentPose& p, std::uint64_t door_mask) {
    return pose_key(p.x, p.y, p.dir, door_mask);
  }

  /// Egocentric partial view with occlusion: a cell is visible if it can be
  /// reached from the agent through see-through cells inside the window.
  /// Walls and closed doors are visible but block sight.
  Observation observe() const { return observe_from(pose_); }

  Observation observe_from(const AgentPose& p) const {
    const int v = cfg_.view_size;
    const int half = v / 2;
    const int fdx = kDirDx[static_cast<std::size_t>(p.dir)];
    const int fdy = kDirDy[static_cast<std::size_t>(p.dir)];
    const int rdx = -fdy;
    const int rdy = fdx;
    Observation obs{v, std::vector<Cell>(static_cast<std::size_t>(v * v), Cell::kUnseen)};
    std::vector<Cell> raw(obs.grid_patch.size(), Cell::kUnseen);
    for (int row = 0; row < v; ++row) {
      for (int col = 0; col < v; ++col) {
        const int f = (v - 1) - row;
        const int l = col - half;
        const int wx = p.x + f * fdx + l * rdx;
        const int wy = p.y + f * fdy + l * rdy;
        raw[static_cast<std::size_t>(row * v + col)] = in_bounds(wx, wy) ? grid_[index(wx, wy)] : Cell::kUnseen;
      }
    }
    std::vector<char> seen(raw.size(), 0);
    std::deque<int> frontier;
    const int origin = (v - 1) * v + half;
    seen[static_cast<std::size_t>(origin)] = 1;
    frontier.push_back(origin);
    while (!frontier.empty()) {
      const int at = frontier.front();
      frontier.pop_front();
      const Cell c = raw[static_cast<std::size_t>(at)];
      if (at != origin && (c == Cell::kWall || c == Cell::kClosedDoor || c == Cell::kUnseen)) continue;
      const int r = at / v;
      const int cc = at % v;
      constexpr std::array<int, 4> dr{-1, 1, 0, 0};
      constexpr std::array<int, 4> dc{0, 0, -1, 1};
      for (std::size_t k = 0; k < 4; ++k) {
        const int nr = r + dr[k];
        const int nc = cc + dc[k];
        if (nr < 0 || nr >= v || nc < 0 || nc >= v) continue;
        const int n = nr * v + nc;
        if (!seen[static_cast<std::size_t>(n)]) {
          seen[static_cast<std::size_t>(n)] = 1;
          frontier.push_back(n);
        }
      }
    }
    for (std::size_t i = 0; i < raw.size(); ++i)
      if (seen[i]) obs.grid_patch[i] = raw[i];
    return obs;
  }

  /// Shortest action count from the start pose to the goal with all doors
  /// initially closed. Empty if the goal is unreachable.
  std::optional<int> shortest_solution_length() const {
    struct Node {
      AgentPose p;
      std::uint64_t mask;
    };
    const auto door_at = [&](int x, int y) -> int {
      for (std::size_t k = 0; k < doors_.size(); ++k)
        if (doors_[k] == std::pair{x, y}) return static_cast<int>(k);
      return -1;
    };
    std::unordered_map<StateKey, int> dist;
    std::deque<Node> q;
    dist[state_key(start_, 0)] = 0;
    q.push_back({start_, 0});
    while (!q.empty()) {
      const Node n = q.front();
      q.pop_front();
      const int d = dist[state_key(n.p, n.mask)];
      const int fx = n.p.x + kDirDx[static_cast<std::size_t>(n.p.dir)];
      const int fy = n.p.y + kDirDy[static_cast<std::size_t>(n.p.dir)];
      Cell fc = cell(fx, fy);
      const int door = door_at(fx, fy);
      if (door >= 0) fc = (n.mask >> door) & 1 ? Cell::kOpenDoor : Cell::kClosedDoor;
      if (fc == Cell::kGoal) return d + 1;
      std::array<Node, 4> next{n, n, n, n};
      next[0].p.dir = (n.p.dir + 3) % 4;
      next[1].p.dir = (n.p.dir + 1) % 4;
      if (fc == Cell::kFloor || fc == Cell::kOpenDoor) next[2].p = {fx, fy, n.p.dir};
      if (fc == Cell::kClosedDoor) next[3].mask |= 1ULL << door;
      for (const Node& m : next) {
        if (dist.emplace(state_key(m.p, m.mask), d + 1).second) q.push_back(m);
      }
    }
    return std::nullopt;
  }

 private:
  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  void generate(std::uint64_t seed) {
    Rng rng(derive_seed(seed, "multiroom-layout"));
    const int s = cfg_.room_size;
    grid_.assign(static_cast<std::size_t>(width_ * height_), Cell::kFloor);
    for (int x = 0; x < width_; ++x) {
      grid_[index(x, 0)] = Cell::kWall;
      grid_[index(x, height_ - 1)] = Cell::kWall;
    }
    doors_.clear();
    for (int r = 0; r <= cfg_.num_rooms; ++r) {
      const int wx = r * (s + 1);
      for (int y = 0; y < height_; ++y) grid_[index(wx, y)] = Cell::kWall;
      if (r > 0 && r < cfg_.num_rooms) {
        const int dy = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(s)));
        grid_[index(wx, dy)] = Cell::kClosedDoor;
        doors_.emplace_back(wx, dy);
      }
    }
    const int last_x0 = (cfg_.num_rooms - 1) * (s + 1) + 1;
    goal_ = {last_x0 + static_cast<int>(rng.below(static_cast<std::uint64_t>(s))),
             1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(s)))};
    do {
      start_ = {1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(s))),
                1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(s))),
                static_cast<int>(rng.below(4))};
    } while (std::pair{start_.x, start_.y} == goal_);
    grid_[index(goal_.first, goal_.second)] = Cell::kGoal;
    if (!shortest_solution_length())
      throw ConfigError("generated multiroom layout has no path to the goal");
  }

  MultiRoomConfig cfg_;
  int width_ = 0;
  int height_ = 0;
  std::vector<Cell> grid_;
  std::vector<std::pair<int, int>> doors_;
  std::pair<int, int> goal_{0, 0};
  AgentPose start_{};

  AgentPose pose_{};
  std::uint64_t door_mask_ = 0;
  int steps_ = 0;
  bool done_ = false;
};

}  // namespace bebold
