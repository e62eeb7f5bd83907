#pragma once

#include <optional>
#include <vector>

#include "hierq/backups.hpp"
#include "hierq/flat.hpp"
#include "hierq/grid.hpp"
#include "hierq/hierarchy.hpp"
#include "hierq/params.hpp"

namespace hierq {

enum class UpdateRule { OneStep, TreeBackup, Lambda };

enum class Behaviour { FullHierarchy, FlatOnly };

// Goal-conditioned hierarchical agent: one Q tensor per level (all updated
// from the single shared primitive trace), plus eligibility banks for the
// Lambda rule. Owns its episode trace; single-owner, movable.
class HierAgent {
 public:
  HierAgent(const GridWorld& world, HierarchyConfig config, BackupParams params,
            UpdateRule rule, bool restricted_actions = true);

  const HierarchyConfig& config() const { return config_; }
  const BackupParams& params() const { return params_; }
  UpdateRule rule() const { return rule_; }
  bool restricted_actions() const { return restricted_actions_; }
  const GridWorld& world() const { return *world_; }

  int levels() const { return config_.k; }
  const GoalQTensor& q(int level) const { return q_[level]; }
  GoalQTensor& q(int level) { return q_[level]; }
  const EligibilityBank& bank(int level) const { return banks_[level]; }
  const TraceBuffer& trace() const { return trace_; }

  void begin_episode(StateId initial_state);
  // Push one primitive transition and update every level's learner.
  void record(const Transition& tr);
  // Episode-end flush (Tree-Backup depth sweep).
  void end_episode();

 private:
  const GridWorld* world_;
  HierarchyConfig config_;
  BackupParams params_;
  UpdateRule rule_;
  bool restricted_actions_;
  std::vector<GoalQTensor> q_;
  std::vector<EligibilityBank> banks_;
  TraceBuffer trace_;
};

struct EpisodeOutcome {
  long steps = 0;
  bool truncated = false;
};

// One sampled hierarchical action and the primitive interval it spanned.
struct ActionSpan {
  int level;
  StateId subgoal;
  long t_begin;
  long t_end;
};

// Recursive training episode: each level samples up to H_i actions, breaking
// early when the current state equals its own or any higher level's goal.
// With Behaviour::FlatOnly every upper action is pinned to the environment
// goal and upper levels consume no randomness.
EpisodeOutcome run_training_episode(HierAgent& agent, Behaviour behaviour,
                                    std::vector<Rng>& level_rngs, long t_max,
                                    std::vector<ActionSpan>* spans = nullptr);

// Greedy per-level subgoal chain at `state` during evaluation; entry i is the
// goal instructed to level i-1 (entry 0 is the subgoal the primitive policy
// pursues). Upper levels resample greedily at every call.
std::vector<StateId> greedy_goal_chain(const HierAgent& agent, StateId state,
                                       std::vector<Rng>& level_rngs);

// Evaluation episode: greedy goal resampling at every primitive step,
// epsilon-greedy primitive policy, no learning.
EpisodeOutcome run_eval_episode(const HierAgent& agent,
                                std::vector<Rng>& level_rngs, long t_max);

// Flat baseline episodes on the plain environment reward.
EpisodeOutcome run_flat_training_episode(const GridWorld& world,
                                         FlatLearner& learner, double epsilon,
                                         Rng& rng, long t_max);
EpisodeOutcome run_flat_eval_episode(const GridWorld& world, const QTable& q,
                                     double epsilon, Rng& rng, long t_max);

}  // namespace hierq
