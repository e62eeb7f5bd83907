#include "hierq/agent.hpp"

#include <numeric>

namespace hierq {

HierAgent::HierAgent(const GridWorld& world, HierarchyConfig config,
                     BackupParams params, UpdateRule rule,
                     bool restricted_actions)
    : world_(&world),
      config_(std::move(config)),
      params_(params),
      rule_(rule),
      restricted_actions_(restricted_actions) {
  config_.validate();
  params_.validate();

  std::vector<StateId> all_states(world.num_states());
  std::iota(all_states.begin(), all_states.end(), 0);
  std::vector<StateId> env_goal_only = {world.goal()};

  int k = config_.k;
  for (int i = 0; i < k; ++i) {
    // Only the top level's environment-goal column is needed there.
    std::vector<StateId> goals = (i == k - 1) ? env_goal_only : all_states;
    if (i == 0)
      q_.push_back(GoalQTensor::primitive_level(world, std::move(goals)));
    else
      q_.push_back(GoalQTensor::subgoal_level(world, i,
                                              config_.atomic_horizon(i),
                                              std::move(goals),
                                              restricted_actions));
  }
  if (rule_ == UpdateRule::Lambda) {
    for (int i = 0; i < k; ++i)
      banks_.emplace_back(config_.atomic_horizon(i), q_[i].num_goals());
  }
}

void HierAgent::begin_episode(StateId initial_state) {
  trace_.reset(initial_state);
  for (auto& bank : banks_) bank.reset();
}

void HierAgent::record(const Transition& tr) {
  trace_.push(tr.action, tr.next_state);
  int t = trace_.length() - 1;
  for (int i = 0; i < levels(); ++i) {
    int horizon = config_.atomic_horizon(i);
    switch (rule_) {
      case UpdateRule::OneStep:
        hierq_1step_update(q_[i], trace_, t, horizon, params_);
        break;
      case UpdateRule::TreeBackup:
        hiertb_update(q_[i], trace_, t, horizon, params_.n, params_);
        break;
      case UpdateRule::Lambda:
        hierq_lambda_update(q_[i], banks_[i], trace_, t, horizon, params_);
        break;
    }
  }
}

void HierAgent::end_episode() {
  if (rule_ != UpdateRule::TreeBackup) return;
  int t = trace_.length() - 1;
  if (t < 0) return;
  for (int i = 0; i < levels(); ++i)
    hiertb_episode_end(q_[i], trace_, t, config_.atomic_horizon(i), params_);
}

namespace {

// Recursive executor of the training procedure.
struct TrainingRun {
  HierAgent& agent;
  Behaviour behaviour;
  std::vector<Rng>& rngs;
  long t_max;
  std::vector<ActionSpan>* spans;

  std::vector<StateId> goal;  // instructed goal per level
  long t = 0;

  bool goal_reached(int level, StateId s) const {
    for (int j = level; j < agent.levels(); ++j)
      if (goal[j] == s) return true;
    return false;
  }

  StateId recurse(int level, StateId s) {
    const HierarchyConfig& cfg = agent.config();
    int budget = cfg.H[level];
    for (int n = 0; n < budget; ++n) {
      if (goal_reached(level, s) || t >= t_max) break;
      if (level > 0) {
        StateId subgoal;
        if (behaviour == Behaviour::FlatOnly) {
          subgoal = agent.world().goal();
        } else {
          const GoalQTensor& q = agent.q(level);
          double eps = cfg.epsilon_upper;
          SampleResult r = sample_level_action(
              q, s, q.goal_index(goal[level]), goal[level], eps, rngs[level]);
          subgoal = q.action_state(s, r.action_index);
        }
        goal[level - 1] = subgoal;
        long begin = t;
        s = recurse(level - 1, s);
        if (spans)
          spans->push_back({level, subgoal, begin, t});
      } else {
        const GoalQTensor& q = agent.q(0);
        SampleResult r =
            sample_level_action(q, s, q.goal_index(goal[0]), -1,
                                cfg.epsilon_flat_train, rngs[0]);
        Transition tr = agent.world().step(
            s, static_cast<PrimitiveAction>(r.action_index));
        agent.record(tr);
        ++t;
        s = tr.next_state;
      }
    }
    return s;
  }
};

}  // namespace

EpisodeOutcome run_training_episode(HierAgent& agent, Behaviour behaviour,
                                    std::vector<Rng>& level_rngs, long t_max,
                                    std::vector<ActionSpan>* spans) {
  const GridWorld& world = agent.world();
  TrainingRun run{agent, behaviour, level_rngs, t_max, spans, {}, 0};
  run.goal.assign(agent.levels(), -1);
  run.goal[agent.levels() - 1] = world.goal();

  agent.begin_episode(world.start());
  StateId s = world.start();
  while (s != world.goal() && run.t < t_max)
    s = run.recurse(agent.levels() - 1, s);
  agent.end_episode();
  return {run.t, s != world.goal()};
}

std::vector<StateId> greedy_goal_chain(const HierAgent& agent, StateId state,
                                       std::vector<Rng>& level_rngs) {
  std::vector<StateId> chain(agent.levels());
  StateId g = agent.world().goal();
  chain[agent.levels() - 1] = g;
  for (int i = agent.levels() - 1; i >= 1; --i) {
    const GoalQTensor& q = agent.q(i);
    SampleResult r = sample_level_action(q, state, q.goal_index(g), g,
                                         agent.config().epsilon_upper,
                                         level_rngs[i]);
    g = q.action_state(state, r.action_index);
    chain[i - 1] = g;
  }
  return chain;
}

EpisodeOutcome run_eval_episode(const HierAgent& agent,
                                std::vector<Rng>& level_rngs, long t_max) {
  const GridWorld& world = agent.world();
  StateId s = world.start();
  long steps = 0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (s != world.goal() && steps < t_max) {
    // Subgoals are greedily resampled at every primitive step.
    std::vector<StateId> chain = greedy_goal_chain(agent, s, level_rngs);
    const GoalQTensor& q = agent.q(0);
    int action;
    if (unit(level_rngs[0]) < agent.config().epsilon_flat_eval) {
      action = std::uniform_int_distribution<int>(0, q.num_actions(s) - 1)(
          level_rngs[0]);
    } else {
      // Exact ties in the instructed-goal column defer to the environment
      // column, so the evaluation policy is never worse informed than the
      // flat policy it delegates to.
      std::vector<int> best = q.greedy_actions(s, q.goal_index(chain[0]));
      int env = q.goal_index(world.goal());
      double m = q.value(s, best[0], env);
      for (int a : best) m = std::max(m, q.value(s, a, env));
      std::erase_if(best, [&](int a) { return q.value(s, a, env) < m; });
      action = best.size() == 1
                   ? best[0]
                   : best[std::uniform_int_distribution<int>(
                         0, static_cast<int>(best.size()) - 1)(level_rngs[0])];
    }
    s = world.step(s, static_cast<PrimitiveAction>(action)).next_state;
    ++steps;
  }
  return {steps, s != world.goal()};
}

EpisodeOutcome run_flat_training_episode(const GridWorld& world,
                                         FlatLearner& learner, double epsilon,
                                         Rng& rng, long t_max) {
  learner.begin_episode();
  StateId s = world.start();
  long steps = 0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (s != world.goal() && steps < t_max) {
    int action;
    if (unit(rng) < epsilon) {
      action = std::uniform_int_distribution<int>(0, kNumPrimitiveActions - 1)(rng);
    } else {
      const QTable& q = learner.q();
      double m = q.row_max(s);
      std::vector<int> best;
      for (int a = 0; a < kNumPrimitiveActions; ++a)
        if (q.value(s, a) == m) best.push_back(a);
      action = best.size() == 1
                   ? best[0]
                   : best[std::uniform_int_distribution<int>(
                         0, static_cast<int>(best.size()) - 1)(rng)];
    }
    Transition tr = world.step(s, static_cast<PrimitiveAction>(action));
    learner.observe(FlatTransition::from_env(tr));
    s = tr.next_state;
    ++steps;
  }
  learner.finish_episode();
  return {steps, s != world.goal()};
}

EpisodeOutcome run_flat_eval_episode(const GridWorld& world, const QTable& q,
                                     double epsilon, Rng& rng, long t_max) {
  StateId s = world.start();
  long steps = 0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (s != world.goal() && steps < t_max) {
    int action;
    if (unit(rng) < epsilon) {
      action = std::uniform_int_distribution<int>(0, kNumPrimitiveActions - 1)(rng);
    } else {
      double m = q.row_max(s);
      std::vector<int> best;
      for (int a = 0; a < kNumPrimitiveActions; ++a)
        if (q.value(s, a) == m) best.push_back(a);
      action = best.size() == 1
                   ? best[0]
                   : best[std::uniform_int_distribution<int>(
                         0, static_cast<int>(best.size()) - 1)(rng)];
    }
    s = world.step(s, static_cast<PrimitiveAction>(action)).next_state;
    ++steps;
  }
  return {steps, s != world.goal()};
}

}  // namespace hierq
