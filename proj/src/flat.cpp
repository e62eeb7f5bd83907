#include "hierq/flat.hpp"

namespace hierq {

double q_step(QTable& q, const FlatTransition& tr, const BackupParams& params) {
  double bootstrap = tr.terminal ? 0.0 : params.gamma * q.row_max(tr.next_state);
  double delta = tr.reward + bootstrap - q.value(tr.state, tr.action);
  q.value(tr.state, tr.action) += params.alpha * delta;
  return delta;
}

double tb_n_delta(std::span<const FlatTransition> window, const QTable& q,
                  const BackupParams& params) {
  if (window.empty()) throw std::invalid_argument("tb_n_delta: empty window");
  double total = 0.0;
  double weight = 1.0;
  for (size_t k = 0; k < window.size(); ++k) {
    const FlatTransition& tr = window[k];
    if (k > 0) {
      // Greedy target: the product term vanishes as soon as a non-greedy
      // action appears on the trace.
      weight *= params.gamma *
                (q.is_greedy(tr.state, tr.action) ? 1.0 : 0.0);
      if (weight == 0.0) break;
    }
    double bootstrap = tr.terminal ? 0.0 : params.gamma * q.row_max(tr.next_state);
    double delta = tr.reward + bootstrap - q.value(tr.state, tr.action);
    total += weight * delta;
  }
  return total;
}

void watkins_q_lambda_step(QTable& q, ReplacingTrace& z,
                           const FlatTransition& tr,
                           const BackupParams& params) {
  double target =
      tr.reward +
      (tr.terminal ? 0.0 : params.gamma * q.row_max(tr.next_state));
  double delta = target - q.value(tr.state, tr.action);

  // Replacing trace: decay everything by gamma*lambda*pi(A_t|S_t) (zero on a
  // non-greedy action) and propagate the error, then pin the visited pair to
  // eligibility 1 with its plain 1-step update.
  double decay = params.gamma * params.lambda *
                 (q.is_greedy(tr.state, tr.action) ? 1.0 : 0.0);
  auto& zdata = z.data();
  auto& qdata = q.data();
  for (size_t i = 0; i < zdata.size(); ++i) {
    zdata[i] *= decay;
    if (zdata[i] < params.trace_cutoff)
      zdata[i] = 0.0;
    else
      qdata[i] += params.alpha * delta * zdata[i];
  }
  size_t pair = static_cast<size_t>(tr.state) * kNumPrimitiveActions + tr.action;
  zdata[pair] = 1.0;
  qdata[pair] = (1.0 - params.alpha) * qdata[pair] + params.alpha * target;
}

void FlatTBLearner::apply_anchor(int t_n) {
  std::span<const FlatTransition> tail(window_.data() + t_n,
                                       window_.size() - t_n);
  double delta = tb_n_delta(tail, q_, params_);
  const FlatTransition& anchor = window_[t_n];
  q_.value(anchor.state, anchor.action) += params_.alpha * delta;
}

void FlatTBLearner::observe(const FlatTransition& tr) {
  window_.push_back(tr);
  int t = static_cast<int>(window_.size()) - 1;
  int t_n = t - (params_.n - 1);
  if (t_n >= 0) apply_anchor(t_n);
}

void FlatTBLearner::finish_episode() {
  int t = static_cast<int>(window_.size()) - 1;
  if (t < 0) return;
  // Sweep the backup depth from n-1 down to 1 so trailing anchors are not
  // left without their update.
  for (int depth = params_.n - 1; depth >= 1; --depth) {
    int t_n = t - (depth - 1);
    if (t_n >= 0) apply_anchor(t_n);
  }
  window_.clear();
}

}  // namespace hierq
