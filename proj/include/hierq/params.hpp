#pragma once

#include <stdexcept>

namespace hierq {

enum class RewardMode {
  Binary,      // pseudo-reward 1 when the goal state is entered, 0 otherwise
  Penalizing,  // -1 per step, 0 when the goal state is entered; allows gamma=1
};

struct BackupParams {
  double gamma = 0.95;        // discount, [0,1); gamma=1 only with Penalizing
  double alpha = 1.0;         // step size, (0,1]
  double lambda = 0.0;        // eligibility decay, [0,1]
  int n = 1;                  // backup steps, >= 1
  double trace_cutoff = 1e-8; // eligibilities below this are treated as zero
  RewardMode reward_mode = RewardMode::Binary;

  void validate() const {
    if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("gamma out of [0,1]");
    if (reward_mode == RewardMode::Binary && gamma >= 1.0)
      throw std::invalid_argument("binary rewards require gamma < 1");
    if (alpha <= 0.0 || alpha > 1.0) throw std::invalid_argument("alpha out of (0,1]");
    if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("lambda out of [0,1]");
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (trace_cutoff <= 0.0) throw std::invalid_argument("trace_cutoff must be positive");
  }

  double step_reward(bool goal_entered) const {
    if (reward_mode == RewardMode::Binary) return goal_entered ? 1.0 : 0.0;
    return goal_entered ? 0.0 : -1.0;
  }
};

}  // namespace hierq
