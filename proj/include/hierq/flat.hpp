#pragma once

#include <span>
#include <vector>

#include "hierq/grid.hpp"
#include "hierq/params.hpp"

namespace hierq {

// One step of experience in an arbitrary goal-reward MDP. For the plain
// environment task reward/terminal come from Transition; tests also drive
// the learners with per-goal pseudo-reward streams.
struct FlatTransition {
  StateId state;
  int action;  // index into [0, kNumPrimitiveActions)
  StateId next_state;
  double reward;
  bool terminal;

  static FlatTransition from_env(const Transition& tr) {
    return {tr.state, static_cast<int>(tr.action), tr.next_state,
            static_cast<double>(tr.env_reward), tr.terminal};
  }
};

class QTable {
 public:
  explicit QTable(int num_states)
      : num_states_(num_states),
        values_(static_cast<size_t>(num_states) * kNumPrimitiveActions, 0.0) {}

  int num_states() const { return num_states_; }
  double value(StateId s, int a) const { return values_[index(s, a)]; }
  double& value(StateId s, int a) { return values_[index(s, a)]; }

  double row_max(StateId s) const {
    double m = values_[index(s, 0)];
    for (int a = 1; a < kNumPrimitiveActions; ++a)
      m = std::max(m, values_[index(s, a)]);
    return m;
  }
  // Ties with the row maximum count as greedy.
  bool is_greedy(StateId s, int a) const { return value(s, a) == row_max(s); }

  const std::vector<double>& data() const { return values_; }
  std::vector<double>& data() { return values_; }

 private:
  size_t index(StateId s, int a) const {
    return static_cast<size_t>(s) * kNumPrimitiveActions + a;
  }
  int num_states_;
  std::vector<double> values_;
};

class ReplacingTrace {
 public:
  explicit ReplacingTrace(int num_states)
      : values_(static_cast<size_t>(num_states) * kNumPrimitiveActions, 0.0) {}

  double value(StateId s, int a) const {
    return values_[static_cast<size_t>(s) * kNumPrimitiveActions + a];
  }
  void clear() { values_.assign(values_.size(), 0.0); }
  std::vector<double>& data() { return values_; }
  const std::vector<double>& data() const { return values_; }

 private:
  std::vector<double> values_;
};

// 1-step Q-learning update; returns the applied error term.
double q_step(QTable& q, const FlatTransition& tr, const BackupParams& params);

// Forward-view multistep Tree-Backup error over a window of up to n
// consecutive transitions (shorter near episode end), greedy target policy.
double tb_n_delta(std::span<const FlatTransition> window, const QTable& q,
                  const BackupParams& params);

// One online step of Watkins Q(lambda) with a replacing trace.
void watkins_q_lambda_step(QTable& q, ReplacingTrace& z,
                           const FlatTransition& tr,
                           const BackupParams& params);

// Episode-driven learner interface shared by the flat baselines.
class FlatLearner {
 public:
  explicit FlatLearner(int num_states) : q_(num_states) {}
  virtual ~FlatLearner() = default;
  virtual void begin_episode() {}
  virtual void observe(const FlatTransition& tr) = 0;
  virtual void finish_episode() {}
  const QTable& q() const { return q_; }
  QTable& q() { return q_; }

 protected:
  QTable q_;
};

class FlatQLearner final : public FlatLearner {
 public:
  FlatQLearner(int num_states, const BackupParams& params)
      : FlatLearner(num_states), params_(params) {}
  void observe(const FlatTransition& tr) override { q_step(q_, tr, params_); }

 private:
  BackupParams params_;
};

// Online Tree-Backup(n): at step t the anchor pair t-(n-1) receives its
// completed multistep error; remaining anchors are flushed with shrinking
// windows when the episode ends.
class FlatTBLearner final : public FlatLearner {
 public:
  FlatTBLearner(int num_states, const BackupParams& params)
      : FlatLearner(num_states), params_(params) {}
  void begin_episode() override { window_.clear(); }
  void observe(const FlatTransition& tr) override;
  void finish_episode() override;

 private:
  void apply_anchor(int t_n);
  BackupParams params_;
  std::vector<FlatTransition> window_;
};

class FlatQLambdaLearner final : public FlatLearner {
 public:
  FlatQLambdaLearner(int num_states, const BackupParams& params)
      : FlatLearner(num_states), params_(params), z_(num_states) {}
  void begin_episode() override { z_.clear(); }
  void observe(const FlatTransition& tr) override {
    watkins_q_lambda_step(q_, z_, tr, params_);
  }
  const ReplacingTrace& trace() const { return z_; }

 private:
  BackupParams params_;
  ReplacingTrace z_;
};

}  // namespace hierq
