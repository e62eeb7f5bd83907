#include "hierq/backups.hpp"

#include <algorithm>

namespace hierq {

namespace {

// Trailing window states S_t, S_{t-1}, ..., deduplicated (set semantics:
// a revisited state appears once, at its most recent offset).
void trailing_states(const TraceBuffer& trace, int t, int horizon,
                     std::vector<StateId>& out) {
  out.clear();
  int t_min = std::min(horizon - 1, t);
  for (int j = 0; j <= t_min; ++j) {
    StateId s = trace.state(t - j);
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
}

// Level action at transition u: hindsight-relabeled reached state for
// levels > 0, the executed primitive action for level 0. Returns the state
// form (levels > 0) or the action index (level 0).
struct LevelAction {
  StateId target = -1;  // levels > 0
  int index = -1;       // level 0
};

LevelAction level_action(const GoalQTensor& q, const TraceBuffer& trace,
                         int reached_index) {
  LevelAction a;
  if (q.level() > 0)
    a.target = trace.state(reached_index);
  else
    a.index = static_cast<int>(trace.action(reached_index - 1));
  return a;
}

int resolve_action(const GoalQTensor& q, StateId s, const LevelAction& a) {
  return q.level() > 0 ? q.action_index(s, a.target) : a.index;
}

}  // namespace

void reward_and_termination(const GoalQTensor& q, StateId state,
                            const BackupParams& params,
                            std::vector<double>& reward,
                            std::vector<double>& termination) {
  int ng = q.num_goals();
  reward.resize(ng);
  termination.resize(ng);
  for (int g = 0; g < ng; ++g) {
    bool entered = q.goal_state(g) == state;
    reward[g] = params.step_reward(entered);
    termination[g] = entered ? 0.0 : params.gamma;
  }
}

void hier_return(const GoalQTensor& q, StateId next_state,
                 const BackupParams& params, std::vector<double>& out) {
  static thread_local std::vector<double> reward, termination, bootstrap;
  reward_and_termination(q, next_state, params, reward, termination);
  q.row_max_all(next_state, bootstrap);
  int ng = q.num_goals();
  out.resize(ng);
  for (int g = 0; g < ng; ++g)
    out[g] = reward[g] + termination[g] * bootstrap[g];
}

namespace {

void overwrite_trailing(GoalQTensor& q, const TraceBuffer& trace, int anchor,
                        int horizon, const LevelAction& action,
                        const std::vector<double>& target,
                        const BackupParams& params) {
  static thread_local std::vector<StateId> window;
  trailing_states(trace, anchor, horizon, window);
  int ng = q.num_goals();
  for (StateId s : window) {
    int a = resolve_action(q, s, action);
    if (a < 0) continue;  // hindsight action outside the restricted set
    auto row = q.action_row(s, a);
    for (int g = 0; g < ng; ++g)
      row[g] = (1.0 - params.alpha) * row[g] + params.alpha * target[g];
  }
}

}  // namespace

void hierq_1step_update(GoalQTensor& q, const TraceBuffer& trace, int t,
                        int horizon, const BackupParams& params) {
  static thread_local std::vector<double> g_return;
  hier_return(q, trace.state(t + 1), params, g_return);
  overwrite_trailing(q, trace, t, horizon, level_action(q, trace, t + 1),
                     g_return, params);
}

namespace {

void hiertb_update_depth(GoalQTensor& q, const TraceBuffer& trace, int t,
                         int horizon, int n, const BackupParams& params) {
  int anchor = t - horizon * (n - 1);
  if (anchor < 0) return;  // warm-up: the multistep window is not filled yet

  static thread_local std::vector<double> g_return, reward, termination, best;
  hier_return(q, trace.state(t + 1), params, g_return);
  int ng = q.num_goals();

  // Backward walk over the interior backup nodes, stride `horizon`.
  for (int node = t - horizon + 1; node >= anchor + 1; node -= horizon) {
    StateId s = trace.state(node);
    LevelAction continuation = level_action(q, trace, node + horizon);
    int a = resolve_action(q, s, continuation);
    reward_and_termination(q, s, params, reward, termination);
    q.row_max_all(s, best);
    for (int g = 0; g < ng; ++g) {
      // Greedy-indicator target policy; inadmissible actions truncate.
      bool greedy = a >= 0 && q.value(s, a, g) == best[g];
      double continued = greedy ? g_return[g] : best[g];
      g_return[g] = reward[g] + termination[g] * continued;
    }
  }

  overwrite_trailing(q, trace, anchor, horizon,
                     level_action(q, trace, anchor + 1), g_return, params);
}

}  // namespace

void hiertb_update(GoalQTensor& q, const TraceBuffer& trace, int t,
                   int horizon, int n, const BackupParams& params) {
  hiertb_update_depth(q, trace, t, horizon, n, params);
}

void hiertb_episode_end(GoalQTensor& q, const TraceBuffer& trace, int t,
                        int horizon, const BackupParams& params) {
  for (int depth = params.n - 1; depth >= 1; --depth)
    hiertb_update_depth(q, trace, t, horizon, depth, params);
}

void hierq_lambda_update(GoalQTensor& q, EligibilityBank& bank,
                         const TraceBuffer& trace, int t, int horizon,
                         const BackupParams& params) {
  static thread_local std::vector<double> g_return, delta, decay, reward,
      termination, best;

  int t_min = std::min(horizon - 1, t);
  StateId window_open = trace.state(t - t_min);
  LevelAction action = level_action(q, trace, t + 1);
  int ref = resolve_action(q, window_open, action);
  int ng = q.num_goals();

  hier_return(q, trace.state(t + 1), params, g_return);

  // Error of the newest pair, propagated along the stored chains. An
  // inadmissible hindsight action contributes no new path.
  delta.assign(ng, 0.0);
  if (ref >= 0) {
    for (int g = 0; g < ng; ++g)
      delta[g] = g_return[g] - q.value(window_open, ref, g);
  }

  // Decay of the active matrix, evaluated at the window-opening state.
  reward_and_termination(q, window_open, params, reward, termination);
  q.row_max_all(window_open, best);
  decay.resize(ng);
  for (int g = 0; g < ng; ++g) {
    // An inadmissible max-span action defines no reference pair; it neither
    // cuts the stored chains nor carries an error of its own.
    bool greedy = ref < 0 || q.value(window_open, ref, g) == best[g];
    decay[g] = params.lambda * termination[g] * (greedy ? 1.0 : 0.0);
  }

  auto& matrix = bank.matrix(bank.active_index(t));
  for (auto it = matrix.begin(); it != matrix.end();) {
    auto& z = it->second;
    auto row = q.action_row(EligibilityBank::key_state(it->first),
                            EligibilityBank::key_action(it->first));
    bool live = false;
    for (int g = 0; g < ng; ++g) {
      z[g] *= decay[g];
      if (z[g] < params.trace_cutoff) {
        z[g] = 0.0;
      } else {
        row[g] += params.alpha * delta[g] * z[g];
        live = true;
      }
    }
    it = live ? std::next(it) : matrix.erase(it);
  }

  // Seed the trailing pairs: full eligibility plus their 1-step overwrite.
  static thread_local std::vector<StateId> window;
  trailing_states(trace, t, horizon, window);
  for (StateId s : window) {
    int a = resolve_action(q, s, action);
    if (a < 0) continue;
    auto& z = matrix[EligibilityBank::key(s, a)];
    z.assign(ng, 1.0);
    auto row = q.action_row(s, a);
    for (int g = 0; g < ng; ++g)
      row[g] = (1.0 - params.alpha) * row[g] + params.alpha * g_return[g];
  }
}

}  // namespace hierq
