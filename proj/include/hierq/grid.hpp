#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hierq {

// Dense index into the set of walkable cells of a map (row-major order).
using StateId = int;

enum class PrimitiveAction : int { Up = 0, Down = 1, Left = 2, Right = 3 };
inline constexpr int kNumPrimitiveActions = 4;

const char* action_name(PrimitiveAction a);

struct Transition {
  StateId state;
  PrimitiveAction action;
  StateId next_state;
  int env_reward;  // 1 iff next_state is the goal
  bool terminal;   // true iff next_state is the goal
};

class MapError : public std::runtime_error {
 public:
  explicit MapError(const std::string& what) : std::runtime_error(what) {}
};

// Deterministic gridworld. Immutable after construction; cheap to share.
// Moves into walls or off the map are self-transitions.
class GridWorld {
 public:
  static GridWorld parse(const std::string& ascii_text, std::string name = "");

  const std::string& name() const { return name_; }
  int width() const { return width_; }
  int height() const { return height_; }
  int num_states() const { return static_cast<int>(cell_of_state_.size()); }
  StateId start() const { return start_; }
  StateId goal() const { return goal_; }

  bool walkable(int row, int col) const {
    return row >= 0 && row < height_ && col >= 0 && col < width_ &&
           state_of_cell_[row * width_ + col] >= 0;
  }
  StateId state_at(int row, int col) const;
  int row_of(StateId s) const { return cell_of_state_[s] / width_; }
  int col_of(StateId s) const { return cell_of_state_[s] % width_; }

  int l1_distance(StateId a, StateId b) const {
    return std::abs(row_of(a) - row_of(b)) + std::abs(col_of(a) - col_of(b));
  }

  Transition step(StateId state, PrimitiveAction action) const;

  std::string render() const;

 private:
  std::string name_;
  int width_ = 0;
  int height_ = 0;
  StateId start_ = -1;
  StateId goal_ = -1;
  std::vector<int> state_of_cell_;   // -1 for walls
  std::vector<int> cell_of_state_;   // row * width + col
};

// The six bundled benchmark maps. Layout text is embedded; identical copies
// ship under maps/ for auditing.
std::vector<GridWorld> builtin_environments();

// Lookup by slug ("10x10-gridworld", ...) or display name; throws MapError
// on unknown names.
GridWorld builtin_environment(const std::string& name);

const std::vector<std::pair<std::string, std::string>>& builtin_map_sources();

// Episode history of primitive transitions. Single-owner; append-only
// between resets.
class TraceBuffer {
 public:
  void reset(StateId initial_state) {
    states_.assign(1, initial_state);
    actions_.clear();
  }
  void push(PrimitiveAction a, StateId next_state) {
    actions_.push_back(a);
    states_.push_back(next_state);
  }
  // Number of transitions recorded so far.
  int length() const { return static_cast<int>(actions_.size()); }
  StateId state(int t) const { return states_[t]; }
  PrimitiveAction action(int t) const { return actions_[t]; }
  StateId last_state() const { return states_.back(); }

 private:
  std::vector<StateId> states_;
  std::vector<PrimitiveAction> actions_;
};

}  // namespace hierq
