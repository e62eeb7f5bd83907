#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hierq/combinatorics.hpp"
#include "hierq/harness.hpp"
#include "hierq/snapshot.hpp"

namespace fs = std::filesystem;
using namespace hierq;

namespace {

GridWorld load_map(const std::string& name_or_path) {
  if (fs::exists(name_or_path)) {
    std::ifstream in(name_or_path);
    std::ostringstream text;
    text << in.rdbuf();
    return GridWorld::parse(text.str(), fs::path(name_or_path).stem().string());
  }
  return builtin_environment(name_or_path);
}

void write_outputs(const fs::path& dir, const std::string& stem,
                   const ExperimentConfig& config,
                   const std::vector<RunRecord>& records) {
  fs::create_directories(dir);
  write_records_csv(records, (dir / (stem + "-records.csv")).string());
  write_report_csv(aggregate(records), (dir / (stem + "-report.csv")).string());
  std::ofstream cfg(dir / (stem + "-config.txt"));
  cfg << format_config(config);
}

// Replays the training stream of one seed to capture the final tables.
HierAgent train_snapshot_agent(const ExperimentConfig& config,
                               const GridWorld& world, int seed) {
  HierAgent agent(world, config.hierarchy, config.params,
                  config.algorithm == Algorithm::HierTB ? UpdateRule::TreeBackup
                  : config.algorithm == Algorithm::HierQLambda
                      ? UpdateRule::Lambda
                      : UpdateRule::OneStep,
                  config.restricted_actions);
  std::vector<Rng> rngs;
  for (int i = 0; i < config.hierarchy.k; ++i)
    rngs.push_back(Rng(derive_seed(config.root_seed, seed, i, 0)));
  for (int ep = 0; ep < config.num_episodes; ++ep)
    run_training_episode(agent, config.behaviour, rngs, config.t_max);
  return agent;
}

int run_command(const std::string& config_path, const std::string& out_dir,
                int seeds, int episodes, int parallel,
                const std::string& snapshot_out) {
  ExperimentConfig config = parse_config_file(config_path);
  if (seeds > 0) config.num_seeds = seeds;
  if (episodes > 0) config.num_episodes = episodes;
  config.validate();

  std::vector<RunRecord> records = run_experiment(config, parallel);
  write_outputs(out_dir, "run", config, records);

  AggregateReport report = aggregate(records);
  std::cout << "episodes: " << config.num_episodes
            << "  seeds: " << config.num_seeds
            << "\nmarginal mean-log: " << report.marginal
            << "\nfirst training episode: " << report.first_episode_mean
            << " +/- " << report.first_episode_se << " steps\n";

  if (!snapshot_out.empty()) {
    if (config.flat()) {
      std::cerr << "snapshot output requires a hierarchical algorithm\n";
      return 1;
    }
    GridWorld world = builtin_environment(config.environment);
    HierAgent agent = train_snapshot_agent(config, world, 0);
    save_snapshot(agent, snapshot_out);
    std::cout << "snapshot (seed 0) written to " << snapshot_out << '\n';
  }
  return 0;
}

int grid_command(const std::string& study, const std::string& env,
                 const std::string& out_dir, int seeds, int episodes,
                 int parallel) {
  std::vector<LabeledConfig> grid;
  if (study == "main")
    grid = main_grid(env);
  else if (study == "depth")
    grid = depth_balanced_grid(env, 0.95, 9, {1, 2, 3});
  else {
    std::cerr << "unknown study: " << study << '\n';
    return 1;
  }

  fs::path dir(out_dir);
  fs::create_directories(dir);
  std::ofstream summary(dir / "summary.csv");
  summary << "label,marginal,first_episode_mean,first_episode_se\n";
  for (auto& [label, config] : grid) {
    if (seeds > 0) config.num_seeds = seeds;
    if (episodes > 0) config.num_episodes = episodes;
    config.validate();
    std::vector<RunRecord> records = run_experiment(config, parallel);
    write_outputs(dir, label, config, records);
    AggregateReport report = aggregate(records);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s,%.10g,%.10g,%.10g", label.c_str(),
                  report.marginal, report.first_episode_mean,
                  report.first_episode_se);
    summary << buf << '\n';
    std::cout << label << ": marginal " << report.marginal << '\n';
  }
  return 0;
}

int count_paths_command(int h, int n, long long t) {
  if (t >= 0) {
    std::cout << backup_path_count(t, h, n) << '\n';
    return 0;
  }
  std::cout << "total: " << total_backup_paths(h, n) << '\n';
  std::cout << "sparsified: " << sparsified_path_count(h, n) << '\n';
  std::cout << "depth,count\n";
  for (long long d = n; d <= static_cast<long long>(n) * h; ++d)
    std::cout << d << ',' << backup_path_count(d, h, n) << '\n';
  return 0;
}

int dump_policy_command(const std::string& snapshot_path,
                        const std::string& map_name,
                        const std::string& out_path) {
  GridWorld world = map_name.empty()
                        ? builtin_environment(snapshot_environment(snapshot_path))
                        : load_map(map_name);
  HierAgent agent = load_snapshot(snapshot_path, world);
  if (out_path.empty())
    dump_greedy_policy(agent, std::cout);
  else
    dump_greedy_policy(agent, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical multistep Q-learning experiment harness"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", snapshot_out;
  int seeds = 0, episodes = 0, parallel = 1;
  auto* run = app.add_subcommand("run", "Run one experiment configuration");
  run->add_option("--config", config_path, "key=value config file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seeds", seeds, "override the seed count");
  run->add_option("--episodes", episodes, "override the episode count");
  run->add_option("--parallel", parallel, "worker threads across seeds");
  run->add_option("--snapshot-out", snapshot_out,
                  "save the trained tables of seed 0");

  std::string study = "main", env = "10x10-gridworld";
  auto* grid = app.add_subcommand("grid", "Run a parameter-grid study");
  grid->add_option("--study", study, "main or depth")->required();
  grid->add_option("--env", env, "bundled environment name")->required();
  grid->add_option("--out", out_dir, "output directory");
  grid->add_option("--seeds", seeds, "override the seed count");
  grid->add_option("--episodes", episodes, "override the episode count");
  grid->add_option("--parallel", parallel, "worker threads across seeds");

  int h = 1, n = 1;
  long long t = -1;
  auto* count = app.add_subcommand("count-paths",
                                   "Count distinct multistep backup paths");
  count->set_help_flag("--help", "print help");  // frees -h for the jump span
  count->add_option("--h", h, "maximum jump length")->required();
  count->add_option("--n", n, "number of jumps")->required();
  count->add_option("--t", t, "restrict to one total depth");

  std::string snapshot_path, map_name, policy_out;
  auto* dump = app.add_subcommand("dump-policy",
                                  "Write the greedy policy of a snapshot");
  dump->add_option("--snapshot", snapshot_path, "snapshot file")->required();
  dump->add_option("--map", map_name, "map file or bundled environment name");
  dump->add_option("--out", policy_out, "output CSV (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return run_command(config_path, out_dir, seeds, episodes, parallel,
                         snapshot_out);
    if (grid->parsed())
      return grid_command(study, env, out_dir, seeds, episodes, parallel);
    if (count->parsed()) return count_paths_command(h, n, t);
    if (dump->parsed())
      return dump_policy_command(snapshot_path, map_name, policy_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
