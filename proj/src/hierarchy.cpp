#include "hierq/hierarchy.hpp"

#include <algorithm>
#include <limits>

namespace hierq {

GoalQTensor GoalQTensor::primitive_level(const GridWorld& world,
                                         std::vector<StateId> goals) {
  GoalQTensor q;
  q.level_ = 0;
  q.num_states_ = world.num_states();
  q.goals_ = std::move(goals);
  q.goal_index_.assign(q.num_states_, -1);
  for (int g = 0; g < static_cast<int>(q.goals_.size()); ++g)
    q.goal_index_[q.goals_[g]] = g;

  q.action_begin_.assign(q.num_states_, 0);
  q.action_end_.assign(q.num_states_, kNumPrimitiveActions);
  q.value_begin_.resize(q.num_states_);
  size_t per_state = static_cast<size_t>(kNumPrimitiveActions) * q.goals_.size();
  for (int s = 0; s < q.num_states_; ++s)
    q.value_begin_[s] = static_cast<size_t>(s) * per_state;
  q.values_.assign(per_state * q.num_states_, 0.0);
  return q;
}

GoalQTensor GoalQTensor::subgoal_level(const GridWorld& world, int level,
                                       int radius, std::vector<StateId> goals,
                                       bool restricted) {
  GoalQTensor q;
  q.level_ = level;
  q.num_states_ = world.num_states();
  q.goals_ = std::move(goals);
  q.goal_index_.assign(q.num_states_, -1);
  for (int g = 0; g < static_cast<int>(q.goals_.size()); ++g)
    q.goal_index_[q.goals_[g]] = g;

  q.action_begin_.resize(q.num_states_);
  q.action_end_.resize(q.num_states_);
  q.value_begin_.resize(q.num_states_);
  size_t value_cursor = 0;
  for (StateId s = 0; s < q.num_states_; ++s) {
    q.action_begin_[s] = q.action_states_.size();
    if (restricted) {
      // l1 ball on grid coordinates, walls ignored; never the state itself.
      int r0 = world.row_of(s), c0 = world.col_of(s);
      for (int dr = -radius; dr <= radius; ++dr) {
        int rest = radius - std::abs(dr);
        for (int dc = -rest; dc <= rest; ++dc) {
          if (dr == 0 && dc == 0) continue;
          int r = r0 + dr, c = c0 + dc;
          if (world.walkable(r, c))
            q.action_states_.push_back(world.state_at(r, c));
        }
      }
      std::sort(q.action_states_.begin() + q.action_begin_[s],
                q.action_states_.end());
    } else {
      for (StateId g = 0; g < q.num_states_; ++g)
        if (g != s) q.action_states_.push_back(g);
    }
    q.action_end_[s] = q.action_states_.size();
    q.value_begin_[s] = value_cursor;
    value_cursor += (q.action_end_[s] - q.action_begin_[s]) * q.goals_.size();
  }
  q.values_.assign(value_cursor, 0.0);
  return q;
}

int GoalQTensor::action_index(StateId s, StateId target) const {
  if (level_ == 0) return target >= 0 && target < kNumPrimitiveActions ? target : -1;
  auto first = action_states_.begin() + action_begin_[s];
  auto last = action_states_.begin() + action_end_[s];
  auto it = std::lower_bound(first, last, target);
  if (it == last || *it != target) return -1;
  return static_cast<int>(it - first);
}

double GoalQTensor::row_max(StateId s, int g) const {
  int na = num_actions(s);
  double m = values_[offset(s, 0, g)];
  for (int a = 1; a < na; ++a) m = std::max(m, values_[offset(s, a, g)]);
  return m;
}

void GoalQTensor::row_max_all(StateId s, std::vector<double>& out) const {
  int ng = num_goals();
  int na = num_actions(s);
  out.assign(ng, -std::numeric_limits<double>::infinity());
  const double* base = values_.data() + value_begin_[s];
  for (int a = 0; a < na; ++a) {
    const double* row = base + static_cast<size_t>(a) * ng;
    for (int g = 0; g < ng; ++g) out[g] = std::max(out[g], row[g]);
  }
}

std::vector<int> GoalQTensor::greedy_actions(StateId s, int g) const {
  int na = num_actions(s);
  double m = row_max(s, g);
  std::vector<int> best;
  for (int a = 0; a < na; ++a)
    if (values_[offset(s, a, g)] == m) best.push_back(a);
  return best;
}

SampleResult sample_level_action(const GoalQTensor& q, StateId s, int g,
                                 StateId instructed_goal, double epsilon,
                                 Rng& rng) {
  int na = q.num_actions(s);
  if (q.level() > 0 && instructed_goal >= 0) {
    // If the instructed goal is within reach it is sampled outright.
    int idx = q.action_index(s, instructed_goal);
    if (idx >= 0) return {idx, false};
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) < epsilon) {
    std::uniform_int_distribution<int> pick(0, na - 1);
    return {pick(rng), true};
  }
  std::vector<int> best = q.greedy_actions(s, g);
  if (best.size() == 1) return {best[0], false};
  std::uniform_int_distribution<int> pick(0, static_cast<int>(best.size()) - 1);
  return {best[pick(rng)], false};
}

}  // namespace hierq
