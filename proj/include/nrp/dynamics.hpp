#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nrp/core.hpp"
#include "nrp/learners.hpp"
#include "nrp/simplex.hpp"

namespace nrp {

enum class PlayOrder { WFirst, PFirst };
enum class WeightSchedule { Linear, Uniform };  // alpha_t = t or 1

const char* to_string(PlayOrder order);
const char* to_string(WeightSchedule schedule);

double round_weight(WeightSchedule schedule, int t);

struct DynamicsConfig {
  GameObjective objective = GameObjective::L2Regularized;
  PlayOrder order = PlayOrder::WFirst;
  WeightSchedule weights = WeightSchedule::Linear;
  LearnerSpec w_learner = LearnerSpec::oftl_prev_loss();
  LearnerSpec p_learner = LearnerSpec::ftrl_plus_entropy(0.25);
  int T = 1;
  bool record_full_trace = true;

  // OFTL vs FTRL+ entropy; the game view of both the smooth Perceptron and
  // the accelerated Perceptron with momentum.
  static DynamicsConfig smooth_perceptron(int T);
  // Optimistic entropy FTRL (p plays first) vs unregularized FTRL+.
  static DynamicsConfig nag(int T);
  // Optimistic mirror descent for both players on the unit ball and simplex.
  static DynamicsConfig mirror_prox(Eigen::Index n, int T);
  // q-norm OFTRL vs entropy FTRL+ with uniform weights; p_exp >= 2.
  static DynamicsConfig pnorm(Eigen::Index n, double p_exp, int T);

  // Throws IncompatibleConfig when the learners, objective and order do not
  // fit together, InvalidArgument on bad parameters.
  void validate() const;
};

struct RoundRecord {
  int t = 0;
  double alpha = 0.0;
  // Iterates; empty unless record_full_trace.
  Eigen::VectorXd w;
  Eigen::VectorXd p;
  Eigen::VectorXd w_secondary;
  Eigen::VectorXd p_secondary;
  double l1_delta_p = 0.0;         // ||p_t - p_{t-1}||_1 with p_0 = 1/n
  double margin_avg = 0.0;         // margin of the running weighted average
  double normalized_margin = 0.0;  // NaN while the running sum is zero
  double regret_w = 0.0;           // running weighted regrets after round t
  double regret_p = 0.0;
  double gap_bound = 0.0;          // (regret_w + regret_p) / sum alpha
};

struct Trace {
  DynamicsConfig config;
  std::vector<RoundRecord> rounds;
  RegretAccumulators totals;
  WComparator comparator = WComparator::Unconstrained;
  double weight_sum = 0.0;
  Eigen::VectorXd weighted_w_sum;  // sum alpha_t w_t
  Eigen::VectorXd w_bar;           // weighted_w_sum / weight_sum
  Eigen::VectorXd last_w;
  SimplexPoint last_p = SimplexPoint::uniform(1);
  double sum_sq_l1_delta_p = 0.0;
  double regret_w = 0.0;
  double regret_p = 0.0;
  double gap_bound = 0.0;
};

// Runs the two learners against each other for config.T rounds. Throws
// NonFiniteIterate (index = round) if an iterate leaves the reals.
Trace run_dynamics(const DynamicsConfig& config, const Dataset& data);

// Post-hoc sum alpha_t w_t / sum alpha_t over the recorded iterates.
// Requires a full trace.
Eigen::VectorXd weighted_average(const Trace& trace);

double weighted_regret_w(const Trace& trace, const Dataset& data,
                         GameObjective objective);
double weighted_regret_p(const Trace& trace);

struct GapCheck {
  double lhs;  // m(w) - m(w_bar)
  double rhs;  // (R^w + R^p) / sum alpha
  bool ok;
};
GapCheck gap_bound_check(const Trace& trace, const Dataset& data,
                         GameObjective objective, const Eigen::VectorXd& w);

}  // namespace nrp
