#pragma once

#include <iosfwd>
#include <string>

#include "hierq/agent.hpp"

namespace hierq {

// Flat value dump of every level's Q tensor, preceded by `# key=value`
// metadata lines (environment, k, budgets, restricted flag, rule, backup
// parameters). Row schema: level,state,action,goal,value. Actions and goals
// are StateIds for levels > 0 and primitive indices / goal states for level 0.
void save_snapshot(const HierAgent& agent, std::ostream& out);
void save_snapshot(const HierAgent& agent, const std::string& path);

// Rebuilds an agent (zero values, then the stored rows) from a snapshot.
// The environment is looked up among the bundled maps by the stored name.
HierAgent load_snapshot(std::istream& in, const GridWorld& world);
HierAgent load_snapshot(const std::string& path, const GridWorld& world);

// Environment name stored in a snapshot header, for map lookup.
std::string snapshot_environment(const std::string& path);

// Per-state greedy action of every level as CSV
// (state_row,state_col,level,greedy_action). Level 0 actions print as
// U/D/L/R; higher levels as `row:col` subgoals; all-tie rows print `tie`.
void dump_greedy_policy(const HierAgent& agent, std::ostream& out);
void dump_greedy_policy(const HierAgent& agent, const std::string& path);

}  // namespace hierq
