#include <cmath>

#include "doctest.h"
#include "hierq/agent.hpp"
#include "oracles.hpp"

using namespace hierq;

namespace {

const char* kCorridor7 =
    "#######\n"
    "#S...G#\n"
    "#######\n";

const char* kRoom5 =
    "#######\n"
    "#S....#\n"
    "#.....#\n"
    "#.....#\n"
    "#.....#\n"
    "#....G#\n"
    "#######\n";

std::vector<StateId> all_states(const GridWorld& world) {
  std::vector<StateId> states(world.num_states());
  for (int s = 0; s < world.num_states(); ++s) states[s] = s;
  return states;
}

std::vector<Transition> random_walk(const GridWorld& world, Rng& rng,
                                    int max_steps) {
  std::vector<Transition> episode;
  StateId s = world.start();
  std::uniform_int_distribution<int> pick(0, kNumPrimitiveActions - 1);
  for (int t = 0; t < max_steps && s != world.goal(); ++t) {
    Transition tr = world.step(s, static_cast<PrimitiveAction>(pick(rng)));
    episode.push_back(tr);
    s = tr.next_state;
  }
  return episode;
}

TraceBuffer to_trace(const GridWorld& world,
                     const std::vector<Transition>& episode) {
  TraceBuffer trace;
  trace.reset(episode.empty() ? world.start() : episode.front().state);
  for (const Transition& tr : episode) trace.push(tr.action, tr.next_state);
  return trace;
}

void check_tensors_equal(const GoalQTensor& a, const GoalQTensor& b,
                         double tol) {
  REQUIRE(a.data().size() == b.data().size());
  double worst = 0.0;
  for (size_t i = 0; i < a.data().size(); ++i)
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  CHECK(worst <= tol);
}

}  // namespace

TEST_CASE("per-goal rewards and termination") {
  GridWorld world = GridWorld::parse(kCorridor7, "c7");
  GoalQTensor q = GoalQTensor::primitive_level(world, all_states(world));
  BackupParams p;
  p.gamma = 0.9;

  std::vector<double> r, term;
  StateId s = world.state_at(1, 2);
  reward_and_termination(q, s, p, r, term);
  for (int g = 0; g < q.num_goals(); ++g) {
    if (q.goal_state(g) == s) {
      CHECK(r[g] == 1.0);
      CHECK(term[g] == 0.0);
    } else {
      CHECK(r[g] == 0.0);
      CHECK(term[g] == 0.9);
    }
  }

  p.reward_mode = RewardMode::Penalizing;
  p.gamma = 1.0;
  reward_and_termination(q, s, p, r, term);
  for (int g = 0; g < q.num_goals(); ++g) {
    if (q.goal_state(g) == s) {
      CHECK(r[g] == 0.0);
      CHECK(term[g] == 0.0);
    } else {
      CHECK(r[g] == -1.0);
      CHECK(term[g] == 1.0);
    }
  }
}

TEST_CASE("bootstrapped return vector") {
  GridWorld world = GridWorld::parse(kCorridor7, "c7");
  GoalQTensor q = GoalQTensor::primitive_level(world, all_states(world));
  BackupParams p;
  p.gamma = 0.5;
  StateId s1 = world.state_at(1, 2);
  int g0 = q.goal_index(world.state_at(1, 1));
  q.value(s1, 2, g0) = 0.8;  // Left, toward that goal

  std::vector<double> out;
  hier_return(q, s1, p, out);
  CHECK(out[q.goal_index(s1)] == 1.0);  // arrived: reward 1, no bootstrap
  CHECK(out[g0] == doctest::Approx(0.5 * 0.8));
  CHECK(out[q.goal_index(world.goal())] == 0.0);
}

TEST_CASE("semi-backward one-step update relabels the whole window") {
  GridWorld world = GridWorld::parse(kCorridor7, "c7");
  GoalQTensor q =
      GoalQTensor::subgoal_level(world, 1, 2, all_states(world), true);
  BackupParams p;

  TraceBuffer trace;
  StateId s0 = world.state_at(1, 1), s1 = world.state_at(1, 2),
          s2 = world.state_at(1, 3);
  trace.reset(s0);
  trace.push(PrimitiveAction::Right, s1);
  hierq_1step_update(q, trace, 0, 2, p);
  // Only S_0 trails; hindsight action is the reached state S_1.
  for (int g = 0; g < q.num_goals(); ++g)
    CHECK(q.value(s0, q.action_index(s0, s1), g) ==
          (q.goal_state(g) == s1 ? 1.0 : 0.0));

  trace.push(PrimitiveAction::Right, s2);
  hierq_1step_update(q, trace, 1, 2, p);
  // Both S_1 and S_0 are overwritten under the hindsight action S_2.
  for (StateId s : {s1, s0})
    for (int g = 0; g < q.num_goals(); ++g)
      CHECK(q.value(s, q.action_index(s, s2), g) ==
            (q.goal_state(g) == s2 ? 1.0 : 0.0));
  // The earlier relabel toward S_1 is untouched.
  CHECK(q.value(s0, q.action_index(s0, s1), q.goal_index(s1)) == 1.0);
}

TEST_CASE("horizon-1 updates reduce to the flat learners") {
  GridWorld world = GridWorld::parse(kRoom5, "room5");
  BackupParams p;
  p.gamma = 0.9;

  SUBCASE("tree backup") { p.n = 3; }
  SUBCASE("tree backup, alpha 0.5") { p.n = 2; p.alpha = 0.5; }
  SUBCASE("eligibility, lambda 0.8") { p.lambda = 0.8; }
  SUBCASE("eligibility, lambda 1") { p.lambda = 1.0; }

  GoalQTensor hier = GoalQTensor::primitive_level(world, {world.goal()});
  EligibilityBank bank(1, 1);
  FlatTBLearner flat_tb(world.num_states(), p);
  FlatQLambdaLearner flat_ql(world.num_states(), p);

  bool lambda_rule = p.lambda > 0.0 || (p.n == 1 && p.lambda == 0.0);
  Rng rng(314);
  for (int episode = 0; episode < 4; ++episode) {
    auto walk = random_walk(world, rng, 120);
    TraceBuffer trace = to_trace(world, walk);
    bank.reset();
    flat_tb.begin_episode();
    flat_ql.begin_episode();
    for (int t = 0; t < trace.length(); ++t) {
      if (lambda_rule)
        hierq_lambda_update(hier, bank, trace, t, 1, p);
      else
        hiertb_update(hier, trace, t, 1, p.n, p);
      FlatTransition tr = FlatTransition::from_env(walk[t]);
      if (lambda_rule)
        flat_ql.observe(tr);
      else
        flat_tb.observe(tr);
    }
    if (!lambda_rule) {
      hiertb_episode_end(hier, trace, trace.length() - 1, 1, p);
      flat_tb.finish_episode();
    }
  }

  const QTable& flat = lambda_rule ? flat_ql.q() : flat_tb.q();
  for (StateId s = 0; s < world.num_states(); ++s)
    for (int a = 0; a < kNumPrimitiveActions; ++a)
      CHECK(std::abs(hier.value(s, a, 0) - flat.value(s, a)) <= 1e-12);
}

TEST_CASE("one-step, depth-1 tree backup and lambda=0 coincide") {
  GridWorld world = GridWorld::parse(kRoom5, "room5");
  BackupParams p;
  const int horizon = 3;

  GoalQTensor a =
      GoalQTensor::subgoal_level(world, 1, horizon, all_states(world), true);
  GoalQTensor b = a, c = a;
  EligibilityBank bank(horizon, a.num_goals());

  Rng rng(271);
  for (int episode = 0; episode < 3; ++episode) {
    TraceBuffer trace = to_trace(world, random_walk(world, rng, 80));
    bank.reset();
    for (int t = 0; t < trace.length(); ++t) {
      hierq_1step_update(a, trace, t, horizon, p);
      hiertb_update(b, trace, t, horizon, 1, p);
      hierq_lambda_update(c, bank, trace, t, horizon, p);
    }
    hiertb_episode_end(b, trace, trace.length() - 1, horizon, p);
  }
  check_tensors_equal(a, b, 1e-15);
  check_tensors_equal(a, c, 1e-15);
}

TEST_CASE("online tree backup matches the forward-view replay") {
  std::vector<GridWorld> worlds = {GridWorld::parse(kCorridor7, "c7"),
                                   GridWorld::parse(kRoom5, "room5")};
  Rng rng(99991);
  int fixtures = 0;
  for (const GridWorld& world : worlds)
    for (int horizon : {1, 2, 3})
      for (int n : {1, 2, 3})
        for (int rep = 0; rep < 3; ++rep) {
          BackupParams p;
          p.n = n;
          p.alpha = rep == 2 ? 0.5 : 1.0;
          TraceBuffer trace = to_trace(world, random_walk(world, rng, 12));
          if (trace.length() == 0) continue;

          GoalQTensor online =
              horizon == 1
                  ? GoalQTensor::primitive_level(world, all_states(world))
                  : GoalQTensor::subgoal_level(world, 1, horizon,
                                               all_states(world), true);
          GoalQTensor replayed = online;

          for (int t = 0; t < trace.length(); ++t)
            hiertb_update(online, trace, t, horizon, n, p);
          hiertb_episode_end(online, trace, trace.length() - 1, horizon, p);

          oracle::replay_episode(replayed, trace, horizon, n, p);
          check_tensors_equal(online, replayed, 1e-12);
          ++fixtures;
        }
  CHECK(fixtures >= 50);
}

TEST_CASE("lambda=1 equals offline full-span tree backup on all-greedy traces") {
  GridWorld world = GridWorld::parse(kRoom5, "room5");
  Rng rng(1234);
  std::uniform_int_distribution<int> coin(0, 1);

  for (int horizon : {1, 2, 3})
    for (int rep = 0; rep < 4; ++rep) {
      // A monotone (self-avoiding) walk from the start toward the far corner.
      TraceBuffer trace;
      trace.reset(world.start());
      StateId s = world.start();
      std::vector<bool> visited(world.num_states(), false);
      visited[s] = true;
      while (s != world.goal()) {
        PrimitiveAction a;
        if (world.col_of(s) == 5) a = PrimitiveAction::Down;
        else if (world.row_of(s) == 5) a = PrimitiveAction::Right;
        else a = coin(rng) ? PrimitiveAction::Down : PrimitiveAction::Right;
        Transition tr = world.step(s, a);
        trace.push(tr.action, tr.next_state);
        s = tr.next_state;
        visited[s] = true;
      }

      // Goal set: the endpoint plus every unvisited state, so no column can
      // ever see a non-greedy action.
      std::vector<StateId> goals = {trace.last_state()};
      for (StateId g = 0; g < world.num_states(); ++g)
        if (!visited[g]) goals.push_back(g);

      BackupParams lam;
      lam.lambda = 1.0;
      GoalQTensor online =
          horizon == 1
              ? GoalQTensor::primitive_level(world, goals)
              : GoalQTensor::subgoal_level(world, 1, horizon, goals, true);
      GoalQTensor offline = online;

      EligibilityBank bank(horizon, online.num_goals());
      for (int t = 0; t < trace.length(); ++t)
        hierq_lambda_update(online, bank, trace, t, horizon, lam);

      int last = trace.length() - 1;
      BackupParams tb;
      int full = last / horizon + 1;
      tb.n = full;
      hiertb_update(offline, trace, last, horizon, full, tb);
      hiertb_episode_end(offline, trace, last, horizon, tb);

      check_tensors_equal(online, offline, 1e-10);
    }
}

TEST_CASE("eligibility matrices are strided and disjoint in time") {
  GridWorld world = GridWorld::parse(kRoom5, "room5");
  const int horizon = 3;
  GoalQTensor q =
      GoalQTensor::subgoal_level(world, 1, horizon, all_states(world), true);
  EligibilityBank bank(horizon, q.num_goals());
  BackupParams p;
  p.lambda = 0.9;

  Rng rng(555);
  TraceBuffer trace = to_trace(world, random_walk(world, rng, 60));
  for (int t = 0; t < trace.length(); ++t) {
    // Only the active matrix t mod horizon may change in this step.
    std::vector<EligibilityBank::Matrix> before;
    for (int h = 0; h < horizon; ++h) before.push_back(bank.matrix(h));
    hierq_lambda_update(q, bank, trace, t, horizon, p);
    for (int h = 0; h < horizon; ++h) {
      if (h == bank.active_index(t)) continue;
      CHECK(bank.matrix(h) == before[h]);
    }
    // Every entry of the freshly refilled window carries eligibility <= 1.
    for (int h = 0; h < horizon; ++h)
      for (const auto& [key, z] : bank.matrix(h))
        for (double value : z) {
          CHECK(value >= 0.0);
          CHECK(value <= 1.0);
        }
  }
}

TEST_CASE("binary-reward values stay within [0, 1]") {
  GridWorld world = GridWorld::parse(kRoom5, "room5");
  for (UpdateRule rule :
       {UpdateRule::OneStep, UpdateRule::TreeBackup, UpdateRule::Lambda}) {
    BackupParams p;
    p.n = 3;
    p.lambda = 0.8;
    HierAgent agent(world, HierarchyConfig::uniform(2), p, rule);
    std::vector<Rng> rngs = {Rng(777), Rng(778)};
    for (int ep = 0; ep < 5; ++ep)
      run_training_episode(agent, Behaviour::FullHierarchy, rngs, 5000);
    for (int level = 0; level < 2; ++level)
      for (double v : agent.q(level).data()) {
        CHECK(v >= -1e-12);
        CHECK(v <= 1.0 + 1e-12);
      }
  }
}

TEST_CASE("penalizing rewards admit gamma = 1 and stay non-positive") {
  GridWorld world = GridWorld::parse(kRoom5, "room5");
  BackupParams p;
  p.gamma = 1.0;
  p.reward_mode = RewardMode::Penalizing;
  p.n = 2;
  CHECK_NOTHROW(p.validate());

  HierAgent agent(world, HierarchyConfig::uniform(2), p, UpdateRule::TreeBackup);
  std::vector<Rng> rngs = {Rng(31), Rng(32)};
  for (int ep = 0; ep < 3; ++ep)
    run_training_episode(agent, Behaviour::FullHierarchy, rngs, 5000);
  for (int level = 0; level < 2; ++level)
    for (double v : agent.q(level).data()) CHECK(v <= 1e-12);

  BackupParams bad;
  bad.gamma = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
