#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hierq/agent.hpp"

namespace hierq {

enum class Algorithm {
  HierQ1step,
  HierTB,
  HierQLambda,
  FlatQ,
  FlatTB,
  FlatQLambda,
};

const char* algorithm_name(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

enum class Phase { Train, Eval };

struct ExperimentConfig {
  std::string environment = "10x10 Gridworld";
  Algorithm algorithm = Algorithm::HierTB;
  HierarchyConfig hierarchy = HierarchyConfig::uniform(1);
  BackupParams params;
  Behaviour behaviour = Behaviour::FullHierarchy;
  bool restricted_actions = true;
  int num_seeds = 200;
  int num_episodes = 50;
  long t_max = 100000;
  std::uint64_t root_seed = 1;

  bool flat() const {
    return algorithm == Algorithm::FlatQ || algorithm == Algorithm::FlatTB ||
           algorithm == Algorithm::FlatQLambda;
  }
  void validate() const;
};

struct RunRecord {
  int seed;
  int episode;
  Phase phase;
  long steps;
  bool truncated;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

// One seed of the alternating train-test loop: a fresh zero-initialized
// learner, then per episode one training episode followed by one greedy
// evaluation episode (no learning). Deterministic in (config, seed).
std::vector<RunRecord> run_seed(const ExperimentConfig& config,
                                const GridWorld& world, int seed);

// All seeds of a config, fanned out over `workers` threads (independent
// jobs, records returned in seed order regardless of worker count).
std::vector<RunRecord> run_experiment(const ExperimentConfig& config,
                                      int workers = 1);

struct EpisodeStat {
  int episode;
  double mean_log;
  double se_log;
  int n_seeds;
};

struct AggregateReport {
  std::vector<EpisodeStat> episodes;  // evaluation phase, natural-log steps
  double marginal;                    // unweighted mean over episode means
  double first_episode_mean;          // raw steps of the first training episode
  double first_episode_se;
};

AggregateReport aggregate(const std::vector<RunRecord>& records);

// records schema: seed,episode,phase,steps,truncated
void write_records_csv(const std::vector<RunRecord>& records, std::ostream& out);
void write_records_csv(const std::vector<RunRecord>& records,
                       const std::string& path);
std::vector<RunRecord> read_records_csv(std::istream& in);
std::vector<RunRecord> read_records_csv(const std::string& path);

// report schema: episode,mean_log,se_log,n_seeds
void write_report_csv(const AggregateReport& report, std::ostream& out);
void write_report_csv(const AggregateReport& report, const std::string& path);

// Flat key=value config text; '#' starts a comment. Unknown keys are errors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);
std::string format_config(const ExperimentConfig& config);

struct LabeledConfig {
  std::string label;
  ExperimentConfig config;
};

// The main ablation grid on one environment: for each family (multistep
// n ∈ {1,3,5,8}, eligibility λ ∈ {0,0.5,0.8,1}), all k ∈ {1,2,3,4} and both
// behaviours — 32 configs per family.
std::vector<LabeledConfig> main_grid(const std::string& environment);

// Credit-depth-balanced grid: per k, γ = γ0^(1/H^a_{k-1}) and n = n0 / H^a_{k-1}
// so every variant sends credit equally far per step. n0 must be divisible by
// each horizon.
std::vector<LabeledConfig> depth_balanced_grid(const std::string& environment,
                                               double gamma0, int n0,
                                               const std::vector<int>& k_values);

}  // namespace hierq
