#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "hierq/grid.hpp"
#include "hierq/hierarchy.hpp"
#include "hierq/params.hpp"

namespace hierq {

// Bank of `horizon` disjoint eligibility matrices, cycled by t mod horizon
// so that backup chains with interior time-jumps of exactly `horizon` stay
// separated. Matrices are stored sparsely: one per-goal row per touched
// (state, action) pair; rows whose eligibilities all fall below the cutoff
// are dropped.
class EligibilityBank {
 public:
  using Matrix = std::unordered_map<std::int64_t, std::vector<double>>;

  EligibilityBank(int horizon, int num_goals)
      : horizon_(horizon), num_goals_(num_goals), matrices_(horizon) {}

  int horizon() const { return horizon_; }
  int num_goals() const { return num_goals_; }
  Matrix& matrix(int h) { return matrices_[h]; }
  const Matrix& matrix(int h) const { return matrices_[h]; }
  int active_index(int t) const { return t % horizon_; }

  void reset() {
    for (auto& m : matrices_) m.clear();
  }

  static std::int64_t key(StateId s, int a) {
    return (static_cast<std::int64_t>(s) << 24) | a;
  }
  static StateId key_state(std::int64_t k) { return static_cast<StateId>(k >> 24); }
  static int key_action(std::int64_t k) { return static_cast<int>(k & 0xffffff); }

 private:
  int horizon_;
  int num_goals_;
  std::vector<Matrix> matrices_;
};

// Per-goal pseudo-reward and termination-discount vectors for arriving in
// `state`: the reward is the goal indicator (or its penalizing shift) and
// the discount is zero exactly on the achieved goal column.
void reward_and_termination(const GoalQTensor& q, StateId state,
                            const BackupParams& params,
                            std::vector<double>& reward,
                            std::vector<double>& termination);

// 1-step bootstrapped return vector at next_state (greedy target policy):
// G_g = r_g + gamma_g * max_a Q(next_state, a, g).
void hier_return(const GoalQTensor& q, StateId next_state,
                 const BackupParams& params, std::vector<double>& out);

// Semi-backward 1-step update: casts the newest return to every trailing
// state within the atomic horizon, with the hindsight-relabeled action
// (levels > 0) or the executed primitive action (level 0). Pairs where the
// action is not admissible are skipped.
void hierq_1step_update(GoalQTensor& q, const TraceBuffer& trace, int t,
                        int horizon, const BackupParams& params);

// Multistep Tree-Backup update at step t with backup depth n: seeds the
// return one step ahead and walks the trace backwards in strides of
// `horizon`, then updates the trailing window of the anchor t - horizon*(n-1).
// A no-op while t is inside the warm-up period.
void hiertb_update(GoalQTensor& q, const TraceBuffer& trace, int t,
                   int horizon, int n, const BackupParams& params);

// Episode-end flush: sweeps the backup depth from n-1 down to 1 at the final
// step index.
void hiertb_episode_end(GoalQTensor& q, const TraceBuffer& trace, int t,
                        int horizon, const BackupParams& params);

// One step of the eligibility-bank algorithm: decays and propagates the
// active matrix, then seeds the trailing window pairs with eligibility 1 and
// their 1-step overwrite.
void hierq_lambda_update(GoalQTensor& q, EligibilityBank& bank,
                         const TraceBuffer& trace, int t, int horizon,
                         const BackupParams& params);

}  // namespace hierq
