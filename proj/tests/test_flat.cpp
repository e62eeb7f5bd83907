#include <span>

#include "doctest.h"
#include "hierq/flat.hpp"

using namespace hierq;

namespace {

BackupParams half_gamma() {
  BackupParams p;
  p.gamma = 0.5;
  return p;
}

// Corridor 0-1-2-3 with goal 3, stepped right three times.
std::vector<FlatTransition> corridor_episode() {
  return {
      {0, 3, 1, 0.0, false},
      {1, 3, 2, 0.0, false},
      {2, 3, 3, 1.0, true},
  };
}

}  // namespace

TEST_CASE("one-step update") {
  BackupParams p = half_gamma();
  QTable q(4);
  q.value(1, 0) = 0.8;

  FlatTransition tr{0, 3, 1, 0.0, false};
  double delta = q_step(q, tr, p);
  CHECK(delta == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(q.value(0, 3) == doctest::Approx(0.4).epsilon(1e-12));

  // Terminal transitions do not bootstrap.
  FlatTransition done{2, 3, 3, 1.0, true};
  q.value(3, 0) = 9.0;
  q_step(q, done, p);
  CHECK(q.value(2, 3) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("one-step update respects alpha") {
  BackupParams p = half_gamma();
  p.alpha = 0.25;
  QTable q(2);
  q.value(0, 1) = 1.0;
  FlatTransition tr{0, 1, 1, 1.0, true};
  q_step(q, tr, p);
  CHECK(q.value(0, 1) == doctest::Approx(1.0 + 0.25 * (1.0 - 1.0)));

  q.value(0, 1) = 0.0;
  q_step(q, tr, p);
  CHECK(q.value(0, 1) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("multistep window error: single transition reduces to one-step") {
  BackupParams p = half_gamma();
  QTable q(4);
  q.value(1, 2) = 0.6;
  std::vector<FlatTransition> w = {{0, 3, 1, 0.0, false}};
  QTable probe = q;
  FlatTransition tr = w[0];
  double expected = q_step(probe, tr, p);
  CHECK(tb_n_delta(std::span<const FlatTransition>(w), q, p) ==
        doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("multistep window error: greedy continuation accumulates") {
  BackupParams p = half_gamma();
  QTable q(4);
  auto ep = corridor_episode();
  // All-zero table: every action ties as greedy, so the full product
  // survives: delta = gamma^2 * 1 for the window starting at t=0.
  std::span<const FlatTransition> all(ep);
  CHECK(tb_n_delta(all, q, p) == doctest::Approx(0.25).epsilon(1e-14));

  // A non-greedy interior action truncates the tail.
  q.value(1, 0) = 5.0;  // makes the executed action 3 non-greedy at state 1
  CHECK(tb_n_delta(all, q, p) ==
        doctest::Approx(0.0 + 0.5 * q.row_max(1)).epsilon(1e-14));
}

TEST_CASE("online multistep learner, depth 2, corridor") {
  BackupParams p = half_gamma();
  p.n = 2;
  FlatTBLearner learner(4, p);
  learner.begin_episode();
  for (const auto& tr : corridor_episode()) learner.observe(tr);
  learner.finish_episode();

  CHECK(learner.q().value(2, 3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(learner.q().value(1, 3) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(learner.q().value(0, 3) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("multistep learner at depth 1 equals one-step learner") {
  BackupParams p = half_gamma();
  p.alpha = 0.7;
  FlatTBLearner tb(4, p);
  FlatQLearner one(4, p);
  for (int episode = 0; episode < 3; ++episode) {
    tb.begin_episode();
    one.begin_episode();
    for (const auto& tr : corridor_episode()) {
      tb.observe(tr);
      one.observe(tr);
    }
    tb.finish_episode();
    one.finish_episode();
  }
  for (StateId s = 0; s < 4; ++s)
    for (int a = 0; a < kNumPrimitiveActions; ++a)
      CHECK(tb.q().value(s, a) ==
            doctest::Approx(one.q().value(s, a)).epsilon(1e-14));
}

TEST_CASE("every step gets exactly one anchored update per episode") {
  // With a window longer than the episode, the end-of-episode sweep must
  // cover all remaining anchors: final values match the n=3 run on a
  // 3-transition episode.
  BackupParams p3 = half_gamma();
  p3.n = 3;
  BackupParams p9 = half_gamma();
  p9.n = 9;
  FlatTBLearner a(4, p3), b(4, p9);
  a.begin_episode();
  b.begin_episode();
  for (const auto& tr : corridor_episode()) {
    a.observe(tr);
    b.observe(tr);
  }
  a.finish_episode();
  b.finish_episode();
  for (StateId s = 0; s < 4; ++s)
    for (int act = 0; act < kNumPrimitiveActions; ++act)
      CHECK(a.q().value(s, act) == doctest::Approx(b.q().value(s, act)));
}

TEST_CASE("eligibility learner with lambda=0 equals one-step") {
  BackupParams p = half_gamma();
  p.lambda = 0.0;
  p.alpha = 0.6;
  FlatQLambdaLearner ql(4, p);
  FlatQLearner one(4, p);
  for (const auto& tr : corridor_episode()) {
    ql.observe(tr);
    one.observe(tr);
  }
  for (StateId s = 0; s < 4; ++s)
    for (int a = 0; a < kNumPrimitiveActions; ++a)
      CHECK(ql.q().value(s, a) ==
            doctest::Approx(one.q().value(s, a)).epsilon(1e-14));
}

TEST_CASE("eligibility learner with lambda=1 spreads the terminal error") {
  BackupParams p = half_gamma();
  p.lambda = 1.0;
  FlatQLambdaLearner ql(4, p);
  ql.begin_episode();
  for (const auto& tr : corridor_episode()) ql.observe(tr);

  // Monte-Carlo returns gamma^distance along the greedy corridor.
  CHECK(ql.q().value(2, 3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ql.q().value(1, 3) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ql.q().value(0, 3) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("a non-greedy action cuts the eligibility trace") {
  BackupParams p = half_gamma();
  p.lambda = 1.0;
  FlatQLambdaLearner ql(4, p);
  ql.q().value(1, 0) = 5.0;  // action 3 at state 1 is now non-greedy
  ql.begin_episode();
  for (const auto& tr : corridor_episode()) ql.observe(tr);

  CHECK(ql.q().value(2, 3) == doctest::Approx(1.0).epsilon(1e-12));
  // State 0's trace died at the non-greedy step: it keeps its 1-step value
  // r + gamma * max_a Q(1, a) from the first transition.
  CHECK(ql.q().value(0, 3) == doctest::Approx(0.5 * 5.0).epsilon(1e-12));
}

TEST_CASE("traces reset between episodes") {
  BackupParams p = half_gamma();
  p.lambda = 1.0;
  FlatQLambdaLearner ql(4, p);
  ql.begin_episode();
  for (const auto& tr : corridor_episode()) ql.observe(tr);
  ql.finish_episode();
  ql.begin_episode();
  for (int a = 0; a < kNumPrimitiveActions; ++a)
    for (StateId s = 0; s < 4; ++s) CHECK(ql.trace().value(s, a) == 0.0);
}
