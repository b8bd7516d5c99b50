#pragma once

#include <Eigen/Dense>

#include "nrp/core.hpp"
#include "nrp/simplex.hpp"

namespace nrp {

// Online learners of the weighted OCO protocol. w-learners see losses
// h_t(w) = -g(w, p_t); p-learners see losses l_t(p) = g(w_t, p).
enum class LearnerKind {
  OftlPrevLoss,           // w: optimistic FTL, hint h_{t-1}, over R^d
  FtrlPlusEntropy,        // p: FTRL+ with entropy regularizer over the simplex
  OftrlEntropyPrev,       // p: optimistic FTRL with entropy, hint l_{t-1}
  FtrlPlusUnregularized,  // w: FTRL+ without regularizer over R^d
  OftrlQNorm,             // w: optimistic FTRL with ||.||_q^2 / (2(q-1))
  OmdBall,                // w: optimistic mirror descent on the unit l2 ball
  OmdEntropy,             // p: optimistic mirror descent on the simplex
};

const char* to_string(LearnerKind kind);

struct LearnerSpec {
  LearnerKind kind = LearnerKind::OftlPrevLoss;
  double eta = 1.0;  // ignored by the two FTL-type learners
  double q = 2.0;    // OftrlQNorm only

  static LearnerSpec oftl_prev_loss() { return {LearnerKind::OftlPrevLoss}; }
  static LearnerSpec ftrl_plus_entropy(double eta) {
    return {LearnerKind::FtrlPlusEntropy, eta};
  }
  static LearnerSpec oftrl_entropy_prev(double eta) {
    return {LearnerKind::OftrlEntropyPrev, eta};
  }
  static LearnerSpec ftrl_plus_unregularized() {
    return {LearnerKind::FtrlPlusUnregularized};
  }
  static LearnerSpec oftrl_qnorm(double eta, double q) {
    return {LearnerKind::OftrlQNorm, eta, q};
  }
  static LearnerSpec omd_ball(double eta) { return {LearnerKind::OmdBall, eta}; }
  static LearnerSpec omd_entropy(double eta) {
    return {LearnerKind::OmdEntropy, eta};
  }

  bool plays_w() const;
  // FTRL+ learners include the current round's loss and so must move second.
  bool responds_to_current() const;
  // Throws InvalidArgument when eta <= 0 or q outside (1, 2].
  void validate() const;
};

// Bookkeeping shared by all learners.
//   cumulative: sum_s alpha_s p_s (w-learners) or sum_s alpha_s A w_s
//               (p-learners); always an n-vector.
//   secondary:  OMD secondary iterate (hat z_{t-1}).
//   round:      number of absorbed losses; weight_sum: their total weight.
struct LearnerState {
  Eigen::VectorXd cumulative;
  Eigen::VectorXd secondary;
  int round = 0;
  double weight_sum = 0.0;

  static LearnerState for_w(Eigen::Index n, Eigen::Index d);
  static LearnerState for_p(Eigen::Index n);
};

// Adds alpha * statistic to the cumulative vector and advances the counter.
void absorb(LearnerState& state, double alpha, const Eigen::VectorXd& statistic);

// p_t ∝ exp(-eta * sum_{s<=t} alpha_s l_s). Absorbs (alpha, loss) first.
SimplexPoint entropy_ftrl_plus_step(LearnerState& state, double alpha,
                                    const Eigen::VectorXd& loss, double eta);

// p_t ∝ exp(-eta * [sum_{s<t} alpha_s l_s + alpha_t * hint]). Does not absorb.
SimplexPoint entropy_oftrl_step(const LearnerState& state, double alpha,
                                const Eigen::VectorXd& hint, double eta);

// w_t = A^T (sum_{s<t} alpha_s p_s + alpha_t p_{t-1}) / sum_{s<=t} alpha_s.
Eigen::VectorXd oftl_w_step(const LearnerState& state, double alpha,
                            const SimplexPoint& hint, const Dataset& data);

// Follow-the-leader point A^T (sum alpha_s p_s) / sum alpha_s of the absorbed
// losses; after absorbing p_t this is the look-ahead iterate tilde w_{t+1}.
Eigen::VectorXd ftl_leader(const LearnerState& state, const Dataset& data);

// w_t = argmin sum_{j<=t} alpha_j h_j(w) on l2-regularized losses. Absorbs p_t.
Eigen::VectorXd unregularized_ftrl_w_step(LearnerState& state, double alpha,
                                          const SimplexPoint& p_t,
                                          const Dataset& data);

// Gradient of the conjugate of R(w) = ||w||_q^2 / (2(q-1)):
//   w_i = (q-1) sign(theta_i) |theta_i|^{p-1} ||theta||_p^{2-p},  1/p + 1/q = 1.
Eigen::VectorXd qnorm_dual_map(const Eigen::VectorXd& theta, double q);

// R(w) = ||w||_q^2 / (2(q-1)) and its gradient.
double qnorm_regularizer(const Eigen::VectorXd& w, double q);
Eigen::VectorXd qnorm_regularizer_gradient(const Eigen::VectorXd& w, double q);

// w_t = dual_map(eta * A^T (sum_{s<t} alpha_s p_s + alpha_t p_{t-1})) for
// bilinear losses. Does not absorb.
Eigen::VectorXd qnorm_oftrl_step(const LearnerState& state, double alpha,
                                 const SimplexPoint& hint, const Dataset& data,
                                 double eta, double q);

// One half-step of optimistic mirror descent: Pi_ball(center - eta*alpha*g).
Eigen::VectorXd ball_prox_step(const Eigen::VectorXd& center, double alpha,
                               const Eigen::VectorXd& gradient, double eta);
// Entropic counterpart: p ∝ center * exp(-eta*alpha*g).
SimplexPoint simplex_prox_step(const SimplexPoint& center, double alpha,
                               const Eigen::VectorXd& gradient, double eta);

struct BallStep {
  Eigen::VectorXd decision;   // w_t
  Eigen::VectorXd secondary;  // hat w_t
};
// Both OMD half-steps from state.secondary; stores hat w_t back into state.
BallStep omd_ball_step(LearnerState& state, double alpha,
                       const Eigen::VectorXd& hint_gradient,
                       const Eigen::VectorXd& realized_gradient, double eta);

struct SimplexStep {
  SimplexPoint decision;
  SimplexPoint secondary;
};
SimplexStep omd_simplex_step(LearnerState& state, double alpha,
                             const Eigen::VectorXd& hint_gradient,
                             const Eigen::VectorXd& realized_gradient, double eta);

// Closed-form accumulators sufficient for exact weighted regrets.
struct RegretAccumulators {
  double weight_sum = 0.0;
  Eigen::VectorXd p_sum;     // sum alpha_t p_t
  Eigen::VectorXd loss_sum;  // sum alpha_t A w_t
  double payoff_sum = 0.0;   // sum alpha_t p_t^T A w_t
  double half_sq_norm_sum = 0.0;  // sum alpha_t ||w_t||^2 / 2

  static RegretAccumulators zeros(Eigen::Index n);
  void add(double alpha, const Eigen::VectorXd& w, const Eigen::VectorXd& p,
           const Eigen::VectorXd& Aw);
};

// Comparator set of the w-player's regret.
enum class WComparator {
  Unconstrained,  // R^d (only finite for the regularized objective)
  UnitBall,       // ||w||_2 <= 1
  DualNormBall,   // ||w||_q <= 1: bounded stand-in for an unconstrained
                  // bilinear q-norm learner, whose exact comparator is -inf
};

// Throws UnsupportedGeometry if the pairing has no closed-form comparator.
WComparator w_comparator(const LearnerSpec& w_learner, GameObjective objective);

// sum alpha_t h_t(w_t) - min_{w in comparator set} sum alpha_t h_t(w).
double regret_w(const RegretAccumulators& acc, const Dataset& data,
                GameObjective objective, WComparator comparator, double q = 2.0);
// sum alpha_t l_t(p_t) - min_i (sum alpha_t A w_t)_i.
double regret_p(const RegretAccumulators& acc);

}  // namespace nrp
