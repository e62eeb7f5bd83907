#include <set>

#include "doctest.h"
#include "hierq/grid.hpp"

using namespace hierq;

namespace {

const char* kCorridor =
    "#####\n"
    "#S.G#\n"
    "#####\n";

const char* kRooms =
    "#######\n"
    "#S....#\n"
    "#.....#\n"
    "#.....#\n"
    "#.....#\n"
    "#....G#\n"
    "#######\n";

}  // namespace

TEST_CASE("corridor parses and steps") {
  GridWorld world = GridWorld::parse(kCorridor, "corridor");
  CHECK(world.num_states() == 3);
  CHECK(world.width() == 5);
  CHECK(world.height() == 3);
  CHECK(world.start() == world.state_at(1, 1));
  CHECK(world.goal() == world.state_at(1, 3));

  Transition right = world.step(world.start(), PrimitiveAction::Right);
  CHECK(right.next_state == world.state_at(1, 2));
  CHECK(right.env_reward == 0);
  CHECK_FALSE(right.terminal);

  Transition into_goal = world.step(right.next_state, PrimitiveAction::Right);
  CHECK(into_goal.next_state == world.goal());
  CHECK(into_goal.env_reward == 1);
  CHECK(into_goal.terminal);

  // Walls block: the move becomes a self-transition.
  Transition up = world.step(world.start(), PrimitiveAction::Up);
  CHECK(up.next_state == world.start());
  Transition left = world.step(world.start(), PrimitiveAction::Left);
  CHECK(left.next_state == world.start());
}

TEST_CASE("state indexing is row-major and invertible") {
  GridWorld world = GridWorld::parse(kRooms, "rooms");
  CHECK(world.num_states() == 25);
  StateId prev = -1;
  for (int r = 0; r < world.height(); ++r)
    for (int c = 0; c < world.width(); ++c)
      if (world.walkable(r, c)) {
        StateId s = world.state_at(r, c);
        CHECK(s == prev + 1);
        CHECK(world.row_of(s) == r);
        CHECK(world.col_of(s) == c);
        prev = s;
      }
}

TEST_CASE("l1 distance") {
  GridWorld world = GridWorld::parse(kRooms, "rooms");
  CHECK(world.l1_distance(world.start(), world.goal()) == 8);
  CHECK(world.l1_distance(world.start(), world.start()) == 0);
}

TEST_CASE("malformed maps are rejected") {
  CHECK_THROWS_AS(GridWorld::parse("###\n#S#\n###\n"), MapError);  // no goal
  CHECK_THROWS_AS(GridWorld::parse("###\n#G#\n###\n"), MapError);  // no start
  CHECK_THROWS_AS(GridWorld::parse("####\n#SG\n####\n"), MapError);  // ragged
  CHECK_THROWS_AS(GridWorld::parse("#####\n#SSG#\n#####\n"), MapError);
  CHECK_THROWS_AS(GridWorld::parse("#####\n#SGG#\n#####\n"), MapError);
  CHECK_THROWS_AS(GridWorld::parse("#####\n#S#G#\n#####\n"), MapError);
  CHECK_THROWS_AS(GridWorld::parse("#####\n#SxG#\n#####\n"), MapError);
}

TEST_CASE("bundled environments load and are solvable") {
  auto envs = builtin_environments();
  CHECK(envs.size() == 6);
  std::set<std::string> names;
  for (const auto& env : envs) {
    names.insert(env.name());
    CHECK(env.num_states() > 0);
    CHECK(env.start() != env.goal());
  }
  CHECK(names.size() == 6);

  GridWorld open10 = builtin_environment("10x10-gridworld");
  CHECK(open10.num_states() == 100);
  GridWorld open20 = builtin_environment("20x20 Gridworld");
  CHECK(open20.num_states() == 400);
  CHECK_THROWS_AS(builtin_environment("no-such-map"), MapError);
}

TEST_CASE("bundled map files mirror the embedded layouts") {
  for (const auto& [name, text] : builtin_map_sources())
    CHECK(GridWorld::parse(text, name).render() == text);
}

TEST_CASE("trace buffer indexing") {
  GridWorld world = GridWorld::parse(kCorridor, "corridor");
  TraceBuffer trace;
  trace.reset(world.start());
  CHECK(trace.length() == 0);
  CHECK(trace.state(0) == world.start());

  Transition tr = world.step(world.start(), PrimitiveAction::Right);
  trace.push(tr.action, tr.next_state);
  CHECK(trace.length() == 1);
  CHECK(trace.state(1) == tr.next_state);
  CHECK(trace.action(0) == PrimitiveAction::Right);
  CHECK(trace.last_state() == tr.next_state);

  trace.reset(world.goal());
  CHECK(trace.length() == 0);
  CHECK(trace.state(0) == world.goal());
}
