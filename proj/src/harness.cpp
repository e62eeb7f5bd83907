#include "hierq/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "hierq/rng.hpp"

namespace hierq {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::HierQ1step: return "hierq-1step";
    case Algorithm::HierTB: return "hiertb";
    case Algorithm::HierQLambda: return "hierq-lambda";
    case Algorithm::FlatQ: return "flat-q";
    case Algorithm::FlatTB: return "flat-tb";
    case Algorithm::FlatQLambda: return "flat-q-lambda";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm a :
       {Algorithm::HierQ1step, Algorithm::HierTB, Algorithm::HierQLambda,
        Algorithm::FlatQ, Algorithm::FlatTB, Algorithm::FlatQLambda})
    if (name == algorithm_name(a)) return a;
  throw std::invalid_argument("unknown algorithm: " + name);
}

void ExperimentConfig::validate() const {
  hierarchy.validate();
  params.validate();
  if (flat() && hierarchy.k != 1)
    throw std::invalid_argument("flat algorithms require k = 1");
  if (num_seeds < 1) throw std::invalid_argument("seeds must be >= 1");
  if (num_episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");
}

namespace {

UpdateRule rule_of(Algorithm a) {
  switch (a) {
    case Algorithm::HierQ1step: return UpdateRule::OneStep;
    case Algorithm::HierTB: case Algorithm::FlatTB: return UpdateRule::TreeBackup;
    case Algorithm::HierQLambda: case Algorithm::FlatQLambda:
      return UpdateRule::Lambda;
    default: return UpdateRule::OneStep;
  }
}

std::unique_ptr<FlatLearner> make_flat_learner(const ExperimentConfig& config,
                                               int num_states) {
  switch (config.algorithm) {
    case Algorithm::FlatQ:
      return std::make_unique<FlatQLearner>(num_states, config.params);
    case Algorithm::FlatTB:
      return std::make_unique<FlatTBLearner>(num_states, config.params);
    case Algorithm::FlatQLambda:
      return std::make_unique<FlatQLambdaLearner>(num_states, config.params);
    default:
      throw std::logic_error("not a flat algorithm");
  }
}

std::vector<RunRecord> run_hier_seed(const ExperimentConfig& config,
                                     const GridWorld& world, int seed) {
  HierAgent agent(world, config.hierarchy, config.params,
                  rule_of(config.algorithm), config.restricted_actions);
  int k = config.hierarchy.k;
  std::vector<Rng> train_rngs, eval_rngs;
  for (int i = 0; i < k; ++i) {
    train_rngs.push_back(Rng(derive_seed(config.root_seed, seed, i, 0)));
    eval_rngs.push_back(Rng(derive_seed(config.root_seed, seed, i, 1)));
  }

  std::vector<RunRecord> records;
  records.reserve(2 * config.num_episodes);
  for (int ep = 0; ep < config.num_episodes; ++ep) {
    EpisodeOutcome train =
        run_training_episode(agent, config.behaviour, train_rngs, config.t_max);
    records.push_back({seed, ep, Phase::Train, train.steps, train.truncated});
    EpisodeOutcome eval = run_eval_episode(agent, eval_rngs, config.t_max);
    records.push_back({seed, ep, Phase::Eval, eval.steps, eval.truncated});
  }
  return records;
}

std::vector<RunRecord> run_flat_seed(const ExperimentConfig& config,
                                     const GridWorld& world, int seed) {
  auto learner = make_flat_learner(config, world.num_states());
  Rng train_rng = Rng(derive_seed(config.root_seed, seed, 0, 0));
  Rng eval_rng = Rng(derive_seed(config.root_seed, seed, 0, 1));

  std::vector<RunRecord> records;
  records.reserve(2 * config.num_episodes);
  for (int ep = 0; ep < config.num_episodes; ++ep) {
    EpisodeOutcome train = run_flat_training_episode(
        world, *learner, config.hierarchy.epsilon_flat_train, train_rng,
        config.t_max);
    records.push_back({seed, ep, Phase::Train, train.steps, train.truncated});
    EpisodeOutcome eval = run_flat_eval_episode(
        world, learner->q(), config.hierarchy.epsilon_flat_eval, eval_rng,
        config.t_max);
    records.push_back({seed, ep, Phase::Eval, eval.steps, eval.truncated});
  }
  return records;
}

}  // namespace

std::vector<RunRecord> run_seed(const ExperimentConfig& config,
                                const GridWorld& world, int seed) {
  return config.flat() ? run_flat_seed(config, world, seed)
                       : run_hier_seed(config, world, seed);
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config,
                                      int workers) {
  config.validate();
  GridWorld world = builtin_environment(config.environment);

  std::vector<std::vector<RunRecord>> per_seed(config.num_seeds);
  if (workers <= 1) {
    for (int s = 0; s < config.num_seeds; ++s)
      per_seed[s] = run_seed(config, world, s);
  } else {
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int s = next.fetch_add(1); s < config.num_seeds;
           s = next.fetch_add(1))
        per_seed[s] = run_seed(config, world, s);
    };
    std::vector<std::thread> pool;
    int count = std::min(workers, config.num_seeds);
    pool.reserve(count);
    for (int w = 0; w < count; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<RunRecord> records;
  records.reserve(2 * static_cast<size_t>(config.num_seeds) *
                  config.num_episodes);
  for (auto& chunk : per_seed)
    records.insert(records.end(), chunk.begin(), chunk.end());
  return records;
}

namespace {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe r;
  size_t n = xs.size();
  for (double x : xs) r.mean += x;
  r.mean /= static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.se = std::sqrt(ss / static_cast<double>(n - 1)) /
           std::sqrt(static_cast<double>(n));
  }
  return r;
}

}  // namespace

AggregateReport aggregate(const std::vector<RunRecord>& records) {
  if (records.empty()) throw std::invalid_argument("no records to aggregate");

  std::map<int, std::vector<double>> eval_logs;
  std::vector<double> first_train;
  for (const RunRecord& r : records) {
    if (r.phase == Phase::Eval)
      eval_logs[r.episode].push_back(std::log(static_cast<double>(r.steps)));
    else if (r.episode == 0)
      first_train.push_back(static_cast<double>(r.steps));
  }

  AggregateReport report;
  double sum = 0.0;
  for (const auto& [episode, logs] : eval_logs) {
    MeanSe m = mean_se(logs);
    report.episodes.push_back(
        {episode, m.mean, m.se, static_cast<int>(logs.size())});
    sum += m.mean;
  }
  report.marginal =
      report.episodes.empty() ? 0.0 : sum / report.episodes.size();

  if (!first_train.empty()) {
    MeanSe m = mean_se(first_train);
    report.first_episode_mean = m.mean;
    report.first_episode_se = m.se;
  } else {
    report.first_episode_mean = 0.0;
    report.first_episode_se = 0.0;
  }
  return report;
}

namespace {

std::string format_double(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

}  // namespace

void write_records_csv(const std::vector<RunRecord>& records,
                       std::ostream& out) {
  out << "seed,episode,phase,steps,truncated\n";
  for (const RunRecord& r : records)
    out << r.seed << ',' << r.episode << ','
        << (r.phase == Phase::Train ? "train" : "eval") << ',' << r.steps << ','
        << (r.truncated ? 1 : 0) << '\n';
}

void write_records_csv(const std::vector<RunRecord>& records,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_records_csv(records, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<RunRecord> read_records_csv(std::istream& in) {
  std::vector<RunRecord> records;
  std::string line;
  if (!std::getline(in, line) || line != "seed,episode,phase,steps,truncated")
    throw std::runtime_error("bad records header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    RunRecord r;
    std::getline(row, field, ',');
    r.seed = std::stoi(field);
    std::getline(row, field, ',');
    r.episode = std::stoi(field);
    std::getline(row, field, ',');
    if (field == "train")
      r.phase = Phase::Train;
    else if (field == "eval")
      r.phase = Phase::Eval;
    else
      throw std::runtime_error("bad phase: " + field);
    std::getline(row, field, ',');
    r.steps = std::stol(field);
    std::getline(row, field, ',');
    r.truncated = field == "1";
    records.push_back(r);
  }
  return records;
}

std::vector<RunRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return read_records_csv(in);
}

void write_report_csv(const AggregateReport& report, std::ostream& out) {
  out << "episode,mean_log,se_log,n_seeds\n";
  for (const EpisodeStat& e : report.episodes)
    out << e.episode << ',' << format_double(e.mean_log) << ','
        << format_double(e.se_log) << ',' << e.n_seeds << '\n';
}

void write_report_csv(const AggregateReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_report_csv(report, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

bool parse_bool(const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw std::invalid_argument("bad boolean: " + v);
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  std::string line;
  int budget = 3;
  int k = 1;
  bool saw_k = false, saw_budget = false;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    auto strip = [](std::string s) {
      size_t b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      size_t e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    if (eq == std::string::npos) {
      if (!strip(line).empty())
        throw std::invalid_argument("bad config line: " + line);
      continue;
    }
    std::string key = strip(line.substr(0, eq));
    std::string value = strip(line.substr(eq + 1));
    if (key == "environment") config.environment = value;
    else if (key == "algorithm") config.algorithm = parse_algorithm(value);
    else if (key == "k") { k = std::stoi(value); saw_k = true; }
    else if (key == "budget") { budget = std::stoi(value); saw_budget = true; }
    else if (key == "gamma") config.params.gamma = std::stod(value);
    else if (key == "alpha") config.params.alpha = std::stod(value);
    else if (key == "lambda") config.params.lambda = std::stod(value);
    else if (key == "n") config.params.n = std::stoi(value);
    else if (key == "reward_mode")
      config.params.reward_mode =
          value == "penalizing" ? RewardMode::Penalizing
          : value == "binary"
              ? RewardMode::Binary
              : throw std::invalid_argument("bad reward_mode: " + value);
    else if (key == "behaviour")
      config.behaviour = value == "flat-only" ? Behaviour::FlatOnly
                         : value == "full"
                             ? Behaviour::FullHierarchy
                             : throw std::invalid_argument("bad behaviour: " +
                                                           value);
    else if (key == "restricted_actions")
      config.restricted_actions = parse_bool(value);
    else if (key == "epsilon_train")
      config.hierarchy.epsilon_flat_train = std::stod(value);
    else if (key == "epsilon_eval")
      config.hierarchy.epsilon_flat_eval = std::stod(value);
    else if (key == "epsilon_upper")
      config.hierarchy.epsilon_upper = std::stod(value);
    else if (key == "seeds") config.num_seeds = std::stoi(value);
    else if (key == "episodes") config.num_episodes = std::stoi(value);
    else if (key == "t_max") config.t_max = std::stol(value);
    else if (key == "root_seed") config.root_seed = std::stoull(value);
    else throw std::invalid_argument("unknown config key: " + key);
  }
  if (saw_k || saw_budget) {
    HierarchyConfig h = HierarchyConfig::uniform(k, budget);
    h.epsilon_flat_train = config.hierarchy.epsilon_flat_train;
    h.epsilon_flat_eval = config.hierarchy.epsilon_flat_eval;
    h.epsilon_upper = config.hierarchy.epsilon_upper;
    config.hierarchy = h;
  }
  config.validate();
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  return parse_config(in);
}

std::string format_config(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "environment = " << config.environment << '\n'
      << "algorithm = " << algorithm_name(config.algorithm) << '\n'
      << "k = " << config.hierarchy.k << '\n'
      << "budget = " << config.hierarchy.H[0] << '\n'
      << "gamma = " << format_double(config.params.gamma) << '\n'
      << "alpha = " << format_double(config.params.alpha) << '\n'
      << "lambda = " << format_double(config.params.lambda) << '\n'
      << "n = " << config.params.n << '\n'
      << "reward_mode = "
      << (config.params.reward_mode == RewardMode::Binary ? "binary"
                                                          : "penalizing")
      << '\n'
      << "behaviour = "
      << (config.behaviour == Behaviour::FullHierarchy ? "full" : "flat-only")
      << '\n'
      << "restricted_actions = " << (config.restricted_actions ? 1 : 0) << '\n'
      << "epsilon_train = " << format_double(config.hierarchy.epsilon_flat_train)
      << '\n'
      << "epsilon_eval = " << format_double(config.hierarchy.epsilon_flat_eval)
      << '\n'
      << "epsilon_upper = " << format_double(config.hierarchy.epsilon_upper)
      << '\n'
      << "seeds = " << config.num_seeds << '\n'
      << "episodes = " << config.num_episodes << '\n'
      << "t_max = " << config.t_max << '\n'
      << "root_seed = " << config.root_seed << '\n';
  return out.str();
}

std::vector<LabeledConfig> main_grid(const std::string& environment) {
  std::vector<LabeledConfig> grid;
  const int ks[] = {1, 2, 3, 4};
  const Behaviour behaviours[] = {Behaviour::FullHierarchy,
                                  Behaviour::FlatOnly};
  auto base = [&](int k, Behaviour b) {
    ExperimentConfig c;
    c.environment = environment;
    c.hierarchy = HierarchyConfig::uniform(k);
    c.behaviour = b;
    return c;
  };
  auto suffix = [](int k, Behaviour b) {
    return "-k" + std::to_string(k) +
           (b == Behaviour::FlatOnly ? "-flatonly" : "-full");
  };

  for (int n : {1, 3, 5, 8})
    for (int k : ks)
      for (Behaviour b : behaviours) {
        ExperimentConfig c = base(k, b);
        c.algorithm = Algorithm::HierTB;
        c.params.n = n;
        grid.push_back({"hiertb-n" + std::to_string(n) + suffix(k, b), c});
      }
  for (double lambda : {0.0, 0.5, 0.8, 1.0})
    for (int k : ks)
      for (Behaviour b : behaviours) {
        ExperimentConfig c = base(k, b);
        c.algorithm = Algorithm::HierQLambda;
        c.params.lambda = lambda;
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%g", lambda);
        grid.push_back({std::string("hierql-lambda") + buf + suffix(k, b), c});
      }
  return grid;
}

std::vector<LabeledConfig> depth_balanced_grid(const std::string& environment,
                                               double gamma0, int n0,
                                               const std::vector<int>& k_values) {
  std::vector<LabeledConfig> grid;
  for (int k : k_values) {
    HierarchyConfig h = HierarchyConfig::uniform(k);
    int horizon = 1;
    for (int j = 0; j < k - 1; ++j) horizon *= h.H[j];
    if (n0 % horizon != 0)
      throw std::invalid_argument("n0 not divisible by the top-level horizon");
    ExperimentConfig c;
    c.environment = environment;
    c.algorithm = Algorithm::HierTB;
    c.hierarchy = h;
    c.params.gamma = std::pow(gamma0, 1.0 / horizon);
    c.params.n = n0 / horizon;
    grid.push_back({"depth-k" + std::to_string(k) + "-n" +
                        std::to_string(c.params.n),
                    c});
  }
  return grid;
}

}  // namespace hierq
