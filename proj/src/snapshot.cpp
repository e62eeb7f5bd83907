#include "hierq/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hierq {

namespace {

const char* rule_name(UpdateRule rule) {
  switch (rule) {
    case UpdateRule::OneStep: return "one-step";
    case UpdateRule::TreeBackup: return "tree-backup";
    case UpdateRule::Lambda: return "lambda";
  }
  return "?";
}

UpdateRule parse_rule(const std::string& name) {
  if (name == "one-step") return UpdateRule::OneStep;
  if (name == "tree-backup") return UpdateRule::TreeBackup;
  if (name == "lambda") return UpdateRule::Lambda;
  throw std::runtime_error("bad snapshot rule: " + name);
}

std::string format_double(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

void save_snapshot(const HierAgent& agent, std::ostream& out) {
  const HierarchyConfig& cfg = agent.config();
  const BackupParams& params = agent.params();
  out << "# environment=" << agent.world().name() << '\n';
  out << "# k=" << cfg.k << '\n';
  out << "# H=";
  for (int i = 0; i < cfg.k; ++i) out << (i ? "," : "") << cfg.H[i];
  out << '\n';
  out << "# restricted=" << (agent.restricted_actions() ? 1 : 0) << '\n';
  out << "# rule=" << rule_name(agent.rule()) << '\n';
  out << "# gamma=" << format_double(params.gamma) << '\n';
  out << "# alpha=" << format_double(params.alpha) << '\n';
  out << "# lambda=" << format_double(params.lambda) << '\n';
  out << "# n=" << params.n << '\n';
  out << "# reward_mode="
      << (params.reward_mode == RewardMode::Binary ? "binary" : "penalizing")
      << '\n';
  out << "level,state,action,goal,value\n";
  for (int i = 0; i < agent.levels(); ++i) {
    const GoalQTensor& q = agent.q(i);
    for (StateId s = 0; s < q.num_states(); ++s)
      for (int a = 0; a < q.num_actions(s); ++a)
        for (int g = 0; g < q.num_goals(); ++g) {
          double v = q.value(s, a, g);
          if (v == 0.0) continue;
          int action = i > 0 ? q.action_state(s, a) : a;
          out << i << ',' << s << ',' << action << ',' << q.goal_state(g)
              << ',' << format_double(v) << '\n';
        }
  }
}

void save_snapshot(const HierAgent& agent, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  save_snapshot(agent, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

HierAgent load_snapshot(std::istream& in, const GridWorld& world) {
  HierarchyConfig cfg;
  BackupParams params;
  UpdateRule rule = UpdateRule::OneStep;
  bool restricted = true;
  std::vector<int> budgets;

  std::string line;
  while (in.peek() == '#' && std::getline(in, line)) {
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(2, eq - 2);
    std::string value = line.substr(eq + 1);
    if (key == "k") cfg.k = std::stoi(value);
    else if (key == "H") {
      std::istringstream list(value);
      std::string item;
      while (std::getline(list, item, ',')) budgets.push_back(std::stoi(item));
    } else if (key == "restricted") restricted = value == "1";
    else if (key == "rule") rule = parse_rule(value);
    else if (key == "gamma") params.gamma = std::stod(value);
    else if (key == "alpha") params.alpha = std::stod(value);
    else if (key == "lambda") params.lambda = std::stod(value);
    else if (key == "n") params.n = std::stoi(value);
    else if (key == "reward_mode")
      params.reward_mode =
          value == "penalizing" ? RewardMode::Penalizing : RewardMode::Binary;
  }
  cfg.H = std::move(budgets);
  HierAgent agent(world, cfg, params, rule, restricted);

  if (!std::getline(in, line) || line != "level,state,action,goal,value")
    throw std::runtime_error("bad snapshot header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::getline(row, field, ',');
    int level = std::stoi(field);
    std::getline(row, field, ',');
    StateId s = std::stoi(field);
    std::getline(row, field, ',');
    int action = std::stoi(field);
    std::getline(row, field, ',');
    StateId goal = std::stoi(field);
    std::getline(row, field, ',');
    double value = std::stod(field);

    GoalQTensor& q = agent.q(level);
    int a = level > 0 ? q.action_index(s, action) : action;
    int g = q.goal_index(goal);
    if (a < 0 || g < 0)
      throw std::runtime_error("snapshot row inconsistent with its header");
    q.value(s, a, g) = value;
  }
  return agent;
}

HierAgent load_snapshot(const std::string& path, const GridWorld& world) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return load_snapshot(in, world);
}

std::string snapshot_environment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# environment=", 0) == 0)
      return line.substr(std::string("# environment=").size());
    if (!line.empty() && line[0] != '#') break;
  }
  throw std::runtime_error("snapshot lacks an environment header");
}

void dump_greedy_policy(const HierAgent& agent, std::ostream& out) {
  const GridWorld& world = agent.world();
  out << "state_row,state_col,level,greedy_action\n";
  for (int i = 0; i < agent.levels(); ++i) {
    const GoalQTensor& q = agent.q(i);
    int g = q.goal_index(world.goal());
    for (StateId s = 0; s < q.num_states(); ++s) {
      std::vector<int> best = q.greedy_actions(s, g);
      out << world.row_of(s) << ',' << world.col_of(s) << ',' << i << ',';
      if (static_cast<int>(best.size()) == q.num_actions(s)) {
        out << "tie";
      } else if (i == 0) {
        out << action_name(static_cast<PrimitiveAction>(best.front()));
      } else {
        StateId target = q.action_state(s, best.front());
        out << world.row_of(target) << ':' << world.col_of(target);
      }
      out << '\n';
    }
  }
}

void dump_greedy_policy(const HierAgent& agent, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  dump_greedy_policy(agent, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace hierq
