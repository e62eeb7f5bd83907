#pragma once

#include <span>
#include <vector>

#include "hierq/grid.hpp"
#include "hierq/rng.hpp"

namespace hierq {

struct HierarchyConfig {
  int k = 1;                       // number of levels, >= 1
  std::vector<int> H;              // per-level budget, length k, each >= 1
  double epsilon_flat_train = 0.25;
  double epsilon_flat_eval = 0.05;
  double epsilon_upper = 0.0;

  // Maximum number of primitive steps a level-i action can span:
  // product of the budgets below level i; 1 for i = 0.
  int atomic_horizon(int level) const {
    if (level < 0 || level >= k) throw std::out_of_range("level out of range");
    int h = 1;
    for (int j = 0; j < level; ++j) h *= H[j];
    return h;
  }

  void validate() const {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (static_cast<int>(H.size()) != k)
      throw std::invalid_argument("H must have one budget per level");
    for (int h : H)
      if (h < 1) throw std::invalid_argument("budgets must be >= 1");
  }

  static HierarchyConfig uniform(int k, int budget = 3) {
    HierarchyConfig c;
    c.k = k;
    c.H.assign(k, budget);
    return c;
  }
};

// Goal-conditioned action-value table for one hierarchy level.
//
// Level 0 actions are the four primitive moves; actions of level i > 0 are
// subgoal states restricted (by default) to the l1 ball of radius
// atomic_horizon(i) around the current state, excluding the state itself.
// The top level stores a single goal column (the environment goal); lower
// levels store one column per walkable state.
class GoalQTensor {
 public:
  static GoalQTensor primitive_level(const GridWorld& world,
                                     std::vector<StateId> goals);
  static GoalQTensor subgoal_level(const GridWorld& world, int level,
                                   int radius, std::vector<StateId> goals,
                                   bool restricted = true);

  int level() const { return level_; }
  int num_states() const { return num_states_; }
  int num_goals() const { return static_cast<int>(goals_.size()); }
  StateId goal_state(int g) const { return goals_[g]; }
  // -1 when the tensor does not track that goal (top-level memory layout).
  int goal_index(StateId goal) const {
    return goal >= static_cast<int>(goal_index_.size()) ? -1
                                                        : goal_index_[goal];
  }

  int num_actions(StateId s) const {
    return static_cast<int>(action_end_[s] - action_begin_[s]);
  }
  // Level > 0: the subgoal state an action index denotes.
  StateId action_state(StateId s, int a) const {
    return action_states_[action_begin_[s] + a];
  }
  // Level > 0: index of subgoal `target` at state s, or -1 if inadmissible.
  int action_index(StateId s, StateId target) const;
  std::span<const StateId> admissible_actions(StateId s) const {
    return {action_states_.data() + action_begin_[s],
            static_cast<size_t>(num_actions(s))};
  }

  double value(StateId s, int a, int g) const { return values_[offset(s, a, g)]; }
  double& value(StateId s, int a, int g) { return values_[offset(s, a, g)]; }
  // Contiguous per-goal row of action a at state s.
  std::span<const double> action_row(StateId s, int a) const {
    return {values_.data() + offset(s, a, 0), static_cast<size_t>(num_goals())};
  }
  std::span<double> action_row(StateId s, int a) {
    return {values_.data() + offset(s, a, 0), static_cast<size_t>(num_goals())};
  }

  double row_max(StateId s, int g) const;
  // Per-goal max over admissible actions, accumulated into out (resized).
  void row_max_all(StateId s, std::vector<double>& out) const;
  // Ties with the row maximum count as greedy.
  bool is_greedy(StateId s, int a, int g) const {
    return value(s, a, g) == row_max(s, g);
  }
  std::vector<int> greedy_actions(StateId s, int g) const;

  const std::vector<double>& data() const { return values_; }
  std::vector<double>& data() { return values_; }
  void fill(double v) { values_.assign(values_.size(), v); }

 private:
  size_t offset(StateId s, int a, int g) const {
    return value_begin_[s] + static_cast<size_t>(a) * goals_.size() + g;
  }

  int level_ = 0;
  int num_states_ = 0;
  std::vector<StateId> goals_;
  std::vector<int> goal_index_;       // StateId -> goal column, -1 if absent
  std::vector<size_t> action_begin_;  // per state, into action_states_
  std::vector<size_t> action_end_;
  std::vector<StateId> action_states_;  // empty for level 0
  std::vector<size_t> value_begin_;     // per state, into values_
  std::vector<double> values_;
};

struct SampleResult {
  int action_index;
  bool explored;  // true when the epsilon branch was taken
};

// Epsilon-greedy over the admissible actions at s for goal column g, with
// uniform tie-breaking. For levels above 0 an instructed goal that is itself
// admissible is returned outright (no randomness consumed).
SampleResult sample_level_action(const GoalQTensor& q, StateId s, int g,
                                 StateId instructed_goal, double epsilon,
                                 Rng& rng);

}  // namespace hierq
