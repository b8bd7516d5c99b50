#include "nrp/learners.hpp"

#include <cmath>

#include "nrp/error.hpp"

namespace nrp {

const char* to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::OftlPrevLoss: return "oftl_prev_loss";
    case LearnerKind::FtrlPlusEntropy: return "ftrl_plus_entropy";
    case LearnerKind::OftrlEntropyPrev: return "oftrl_entropy_prev";
    case LearnerKind::FtrlPlusUnregularized: return "ftrl_plus_unregularized";
    case LearnerKind::OftrlQNorm: return "oftrl_qnorm";
    case LearnerKind::OmdBall: return "omd_ball";
    case LearnerKind::OmdEntropy: return "omd_entropy";
  }
  return "unknown";
}

bool LearnerSpec::plays_w() const {
  switch (kind) {
    case LearnerKind::OftlPrevLoss:
    case LearnerKind::FtrlPlusUnregularized:
    case LearnerKind::OftrlQNorm:
    case LearnerKind::OmdBall:
      return true;
    default:
      return false;
  }
}

bool LearnerSpec::responds_to_current() const {
  return kind == LearnerKind::FtrlPlusEntropy ||
         kind == LearnerKind::FtrlPlusUnregularized;
}

void LearnerSpec::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorCode::InvalidArgument, "learner step size must be positive");
  }
  if (kind == LearnerKind::OftrlQNorm && !(q > 1.0 && q <= 2.0)) {
    throw Error(ErrorCode::InvalidArgument, "q must lie in (1, 2]");
  }
}

LearnerState LearnerState::for_w(Eigen::Index n, Eigen::Index d) {
  LearnerState s;
  s.cumulative = Eigen::VectorXd::Zero(n);
  s.secondary = Eigen::VectorXd::Zero(d);
  return s;
}

LearnerState LearnerState::for_p(Eigen::Index n) {
  LearnerState s;
  s.cumulative = Eigen::VectorXd::Zero(n);
  s.secondary = SimplexPoint::uniform(n).values();
  return s;
}

void absorb(LearnerState& state, double alpha, const Eigen::VectorXd& statistic) {
  state.cumulative += alpha * statistic;
  state.weight_sum += alpha;
  ++state.round;
}

SimplexPoint entropy_ftrl_plus_step(LearnerState& state, double alpha,
                                    const Eigen::VectorXd& loss, double eta) {
  absorb(state, alpha, loss);
  return gibbs(eta * state.cumulative);
}

SimplexPoint entropy_oftrl_step(const LearnerState& state, double alpha,
                                const Eigen::VectorXd& hint, double eta) {
  return gibbs(eta * (state.cumulative + alpha * hint));
}

Eigen::VectorXd oftl_w_step(const LearnerState& state, double alpha,
                            const SimplexPoint& hint, const Dataset& data) {
  const Eigen::VectorXd mix = state.cumulative + alpha * hint.values();
  return data.A().transpose() * mix / (state.weight_sum + alpha);
}

Eigen::VectorXd ftl_leader(const LearnerState& state, const Dataset& data) {
  if (state.weight_sum <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "leader of an empty history");
  }
  return data.A().transpose() * state.cumulative / state.weight_sum;
}

Eigen::VectorXd unregularized_ftrl_w_step(LearnerState& state, double alpha,
                                          const SimplexPoint& p_t,
                                          const Dataset& data) {
  absorb(state, alpha, p_t.values());
  return ftl_leader(state, data);
}

Eigen::VectorXd qnorm_dual_map(const Eigen::VectorXd& theta, double q) {
  const double scale = theta.cwiseAbs().maxCoeff();
  if (scale == 0.0) return Eigen::VectorXd::Zero(theta.size());
  if (q == 2.0) return theta;
  const double p = dual_exponent(q);
  const Eigen::ArrayXd t = theta.array() / scale;
  const double norm = lp_norm(t.matrix(), p);
  const Eigen::ArrayXd mag = t.abs().pow(p - 1.0);
  return ((q - 1.0) * scale * std::pow(norm, 2.0 - p) * t.sign() * mag).matrix();
}

double qnorm_regularizer(const Eigen::VectorXd& w, double q) {
  const double norm = lp_norm(w, q);
  return norm * norm / (2.0 * (q - 1.0));
}

Eigen::VectorXd qnorm_regularizer_gradient(const Eigen::VectorXd& w, double q) {
  const double norm = lp_norm(w, q);
  if (norm == 0.0) return Eigen::VectorXd::Zero(w.size());
  const Eigen::ArrayXd mag = (w.cwiseAbs().array() / norm).pow(q - 1.0);
  return (norm / (q - 1.0) * w.array().sign() * mag).matrix();
}

Eigen::VectorXd qnorm_oftrl_step(const LearnerState& state, double alpha,
                                 const SimplexPoint& hint, const Dataset& data,
                                 double eta, double q) {
  const Eigen::VectorXd mix = state.cumulative + alpha * hint.values();
  return qnorm_dual_map(eta * (data.A().transpose() * mix), q);
}

Eigen::VectorXd ball_prox_step(const Eigen::VectorXd& center, double alpha,
                               const Eigen::VectorXd& gradient, double eta) {
  return project_unit_ball(center - eta * alpha * gradient);
}

SimplexPoint simplex_prox_step(const SimplexPoint& center, double alpha,
                               const Eigen::VectorXd& gradient, double eta) {
  return entropic_prox(center, eta * alpha * gradient);
}

BallStep omd_ball_step(LearnerState& state, double alpha,
                       const Eigen::VectorXd& hint_gradient,
                       const Eigen::VectorXd& realized_gradient, double eta) {
  BallStep step{ball_prox_step(state.secondary, alpha, hint_gradient, eta),
                ball_prox_step(state.secondary, alpha, realized_gradient, eta)};
  state.secondary = step.secondary;
  state.weight_sum += alpha;
  ++state.round;
  return step;
}

SimplexStep omd_simplex_step(LearnerState& state, double alpha,
                             const Eigen::VectorXd& hint_gradient,
                             const Eigen::VectorXd& realized_gradient,
                             double eta) {
  const SimplexPoint center(state.secondary);
  SimplexStep step{simplex_prox_step(center, alpha, hint_gradient, eta),
                   simplex_prox_step(center, alpha, realized_gradient, eta)};
  state.secondary = step.secondary.values();
  state.weight_sum += alpha;
  ++state.round;
  return step;
}

RegretAccumulators RegretAccumulators::zeros(Eigen::Index n) {
  RegretAccumulators acc;
  acc.p_sum = Eigen::VectorXd::Zero(n);
  acc.loss_sum = Eigen::VectorXd::Zero(n);
  return acc;
}

void RegretAccumulators::add(double alpha, const Eigen::VectorXd& w,
                             const Eigen::VectorXd& p, const Eigen::VectorXd& Aw) {
  weight_sum += alpha;
  p_sum += alpha * p;
  loss_sum += alpha * Aw;
  payoff_sum += alpha * p.dot(Aw);
  half_sq_norm_sum += alpha * 0.5 * w.squaredNorm();
}

WComparator w_comparator(const LearnerSpec& w_learner, GameObjective objective) {
  if (objective == GameObjective::L2Regularized) return WComparator::Unconstrained;
  switch (w_learner.kind) {
    case LearnerKind::OmdBall: return WComparator::UnitBall;
    case LearnerKind::OftrlQNorm: return WComparator::DualNormBall;
    default:
      throw Error(ErrorCode::UnsupportedGeometry,
                  std::string("bilinear losses over R^d with ") +
                      to_string(w_learner.kind) + " have no finite comparator");
  }
}

double regret_w(const RegretAccumulators& acc, const Dataset& data,
                GameObjective objective, WComparator comparator, double q) {
  double incurred = -acc.payoff_sum;
  if (objective == GameObjective::L2Regularized) incurred += acc.half_sq_norm_sum;
  const Eigen::VectorXd pull = data.A().transpose() * acc.p_sum;
  double best = 0.0;
  switch (comparator) {
    case WComparator::Unconstrained:
      if (objective != GameObjective::L2Regularized) {
        throw Error(ErrorCode::UnsupportedGeometry,
                    "unconstrained bilinear comparator is unbounded");
      }
      best = -pull.squaredNorm() / (2.0 * acc.weight_sum);
      break;
    case WComparator::UnitBall:
    case WComparator::DualNormBall: {
      const double q_eff = comparator == WComparator::UnitBall ? 2.0 : q;
      // max over the q-ball of <pull, w> is the dual norm of pull; the
      // regularized objective would need an inner solve, so it is rejected.
      if (objective == GameObjective::L2Regularized) {
        throw Error(ErrorCode::UnsupportedGeometry,
                    "ball comparator with the regularized objective");
      }
      best = -lp_norm(pull, dual_exponent(q_eff));
      break;
    }
  }
  return incurred - best;
}

double regret_p(const RegretAccumulators& acc) {
  return acc.payoff_sum - acc.loss_sum.minCoeff();
}

}  // namespace nrp
