#include "nrp/dynamics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nrp/error.hpp"
#include "nrp/tolerances.hpp"

namespace nrp {

const char* to_string(PlayOrder order) {
  return order == PlayOrder::WFirst ? "w_first" : "p_first";
}

const char* to_string(WeightSchedule schedule) {
  return schedule == WeightSchedule::Linear ? "linear" : "uniform";
}

double round_weight(WeightSchedule schedule, int t) {
  return schedule == WeightSchedule::Linear ? static_cast<double>(t) : 1.0;
}

DynamicsConfig DynamicsConfig::smooth_perceptron(int T) {
  DynamicsConfig c;
  c.objective = GameObjective::L2Regularized;
  c.order = PlayOrder::WFirst;
  c.weights = WeightSchedule::Linear;
  c.w_learner = LearnerSpec::oftl_prev_loss();
  c.p_learner = LearnerSpec::ftrl_plus_entropy(0.25);
  c.T = T;
  return c;
}

DynamicsConfig DynamicsConfig::nag(int T) {
  DynamicsConfig c;
  c.objective = GameObjective::L2Regularized;
  c.order = PlayOrder::PFirst;
  c.weights = WeightSchedule::Linear;
  c.w_learner = LearnerSpec::ftrl_plus_unregularized();
  c.p_learner = LearnerSpec::oftrl_entropy_prev(0.25);
  c.T = T;
  return c;
}

namespace {

double log_n_checked(Eigen::Index n) {
  if (n < 2) {
    throw Error(ErrorCode::InvalidArgument, "this configuration needs n >= 2");
  }
  return std::log(static_cast<double>(n));
}

}  // namespace

DynamicsConfig DynamicsConfig::mirror_prox(Eigen::Index n, int T) {
  const double root = std::sqrt(log_n_checked(n));
  DynamicsConfig c;
  c.objective = GameObjective::Bilinear;
  c.order = PlayOrder::WFirst;
  c.weights = WeightSchedule::Uniform;
  c.w_learner = LearnerSpec::omd_ball(1.0 / root);
  c.p_learner = LearnerSpec::omd_entropy(root);
  c.T = T;
  return c;
}

DynamicsConfig DynamicsConfig::pnorm(Eigen::Index n, double p_exp, int T) {
  if (!(p_exp >= 2.0) || !std::isfinite(p_exp)) {
    throw Error(ErrorCode::InvalidArgument, "p-norm exponent must be >= 2");
  }
  const double q = dual_exponent(p_exp);
  const double eta_w = std::sqrt(1.0 / (2.0 * (q - 1.0) * log_n_checked(n)));
  DynamicsConfig c;
  c.objective = GameObjective::Bilinear;
  c.order = PlayOrder::WFirst;
  c.weights = WeightSchedule::Uniform;
  c.w_learner = LearnerSpec::oftrl_qnorm(eta_w, q);
  c.p_learner = LearnerSpec::ftrl_plus_entropy(1.0 / eta_w);
  c.T = T;
  return c;
}

void DynamicsConfig::validate() const {
  if (T < 1) throw Error(ErrorCode::InvalidArgument, "horizon T must be >= 1");
  w_learner.validate();
  p_learner.validate();
  if (!w_learner.plays_w()) {
    throw Error(ErrorCode::IncompatibleConfig,
                std::string(to_string(w_learner.kind)) + " is not a w-learner");
  }
  if (p_learner.plays_w()) {
    throw Error(ErrorCode::IncompatibleConfig,
                std::string(to_string(p_learner.kind)) + " is not a p-learner");
  }
  const bool l2 = objective == GameObjective::L2Regularized;
  switch (w_learner.kind) {
    case LearnerKind::OftlPrevLoss:
    case LearnerKind::FtrlPlusUnregularized:
      if (!l2) {
        throw Error(ErrorCode::IncompatibleConfig,
                    std::string(to_string(w_learner.kind)) +
                        " needs the l2-regularized objective");
      }
      break;
    case LearnerKind::OftrlQNorm:
    case LearnerKind::OmdBall:
      if (l2) {
        throw Error(ErrorCode::IncompatibleConfig,
                    std::string(to_string(w_learner.kind)) +
                        " needs the bilinear objective");
      }
      break;
    default:
      break;
  }
  if (order == PlayOrder::WFirst && w_learner.responds_to_current()) {
    throw Error(ErrorCode::IncompatibleConfig,
                "an FTRL+ w-learner must move second");
  }
  if (order == PlayOrder::PFirst && p_learner.responds_to_current()) {
    throw Error(ErrorCode::IncompatibleConfig,
                "an FTRL+ p-learner must move second");
  }
}

namespace {

bool is_omd(const LearnerSpec& spec) {
  return spec.kind == LearnerKind::OmdBall || spec.kind == LearnerKind::OmdEntropy;
}

// One player of the game. `decide` receives the opponent's anchor (the
// previous decision, or the secondary iterate of an OMD opponent) and the
// opponent's move in the current round when it has already been made.
class WPlayer {
 public:
  WPlayer(const LearnerSpec& spec, const Dataset& data)
      : spec_(spec), data_(data), state_(LearnerState::for_w(data.n(), data.d())),
        last_(Eigen::VectorXd::Zero(data.d())) {}

  const Eigen::VectorXd& anchor() const {
    return is_omd(spec_) ? state_.secondary : last_;
  }
  const Eigen::VectorXd& secondary() const { return state_.secondary; }

  const Eigen::VectorXd& decide(double alpha, const SimplexPoint& p_anchor,
                                const SimplexPoint* p_current) {
    absorbed_ = false;
    switch (spec_.kind) {
      case LearnerKind::OftlPrevLoss:
        last_ = oftl_w_step(state_, alpha, p_anchor, data_);
        break;
      case LearnerKind::FtrlPlusUnregularized:
        last_ = unregularized_ftrl_w_step(state_, alpha, *p_current, data_);
        absorbed_ = true;
        break;
      case LearnerKind::OftrlQNorm:
        last_ = qnorm_oftrl_step(state_, alpha, p_anchor, data_, spec_.eta, spec_.q);
        break;
      case LearnerKind::OmdBall:
        last_ = ball_prox_step(state_.secondary, alpha,
                               -(data_.A().transpose() * p_anchor.values()),
                               spec_.eta);
        break;
      default:
        throw Error(ErrorCode::IncompatibleConfig, "not a w-learner");
    }
    return last_;
  }

  void observe(double alpha, const SimplexPoint& p) {
    if (absorbed_) return;
    if (spec_.kind == LearnerKind::OmdBall) {
      state_.secondary = ball_prox_step(
          state_.secondary, alpha, -(data_.A().transpose() * p.values()), spec_.eta);
      state_.weight_sum += alpha;
      ++state_.round;
    } else {
      absorb(state_, alpha, p.values());
    }
  }

 private:
  LearnerSpec spec_;
  const Dataset& data_;
  LearnerState state_;
  Eigen::VectorXd last_;
  bool absorbed_ = false;
};

class PPlayer {
 public:
  PPlayer(const LearnerSpec& spec, const Dataset& data)
      : spec_(spec), data_(data), state_(LearnerState::for_p(data.n())),
        last_(SimplexPoint::uniform(data.n())),
        secondary_(SimplexPoint::uniform(data.n())) {}

  const SimplexPoint& anchor() const { return is_omd(spec_) ? secondary_ : last_; }
  const SimplexPoint& secondary() const { return secondary_; }

  const SimplexPoint& decide(double alpha, const Eigen::VectorXd& w_anchor,
                             const Eigen::VectorXd* w_current) {
    absorbed_ = false;
    switch (spec_.kind) {
      case LearnerKind::FtrlPlusEntropy:
        last_ = entropy_ftrl_plus_step(state_, alpha, data_.A() * *w_current,
                                       spec_.eta);
        absorbed_ = true;
        break;
      case LearnerKind::OftrlEntropyPrev:
        last_ = entropy_oftrl_step(state_, alpha, data_.A() * w_anchor, spec_.eta);
        break;
      case LearnerKind::OmdEntropy:
        last_ = simplex_prox_step(secondary_, alpha, data_.A() * w_anchor,
                                  spec_.eta);
        break;
      default:
        throw Error(ErrorCode::IncompatibleConfig, "not a p-learner");
    }
    return last_;
  }

  void observe(double alpha, const Eigen::VectorXd& w) {
    if (absorbed_) return;
    if (spec_.kind == LearnerKind::OmdEntropy) {
      secondary_ = simplex_prox_step(secondary_, alpha, data_.A() * w, spec_.eta);
      state_.secondary = secondary_.values();
      state_.weight_sum += alpha;
      ++state_.round;
    } else {
      absorb(state_, alpha, data_.A() * w);
    }
  }

 private:
  LearnerSpec spec_;
  const Dataset& data_;
  LearnerState state_;
  SimplexPoint last_;
  SimplexPoint secondary_;
  bool absorbed_ = false;
};

double comparator_q(const DynamicsConfig& config) {
  return config.w_learner.kind == LearnerKind::OftrlQNorm ? config.w_learner.q : 2.0;
}

}  // namespace

Trace run_dynamics(const DynamicsConfig& config, const Dataset& data) {
  config.validate();
  Trace trace;
  trace.config = config;
  trace.comparator = w_comparator(config.w_learner, config.objective);
  trace.totals = RegretAccumulators::zeros(data.n());
  trace.weighted_w_sum = Eigen::VectorXd::Zero(data.d());
  trace.rounds.reserve(static_cast<std::size_t>(config.T));

  WPlayer wp(config.w_learner, data);
  PPlayer pp(config.p_learner, data);
  SimplexPoint previous_p = SimplexPoint::uniform(data.n());
  const double q = comparator_q(config);

  for (int t = 1; t <= config.T; ++t) {
    const double alpha = round_weight(config.weights, t);
    const Eigen::VectorXd w_anchor = wp.anchor();
    const SimplexPoint p_anchor = pp.anchor();
    Eigen::VectorXd w;
    SimplexPoint p = previous_p;
    try {
      if (config.order == PlayOrder::WFirst) {
        w = wp.decide(alpha, p_anchor, nullptr);
        if (!w.allFinite()) throw Error(ErrorCode::NonFinite, "w iterate");
        p = pp.decide(alpha, w_anchor, &w);
      } else {
        p = pp.decide(alpha, w_anchor, nullptr);
        w = wp.decide(alpha, p_anchor, &p);
        if (!w.allFinite()) throw Error(ErrorCode::NonFinite, "w iterate");
      }
      wp.observe(alpha, p);
      pp.observe(alpha, w);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonFinite && e.code() != ErrorCode::Degenerate) {
        throw;
      }
      throw Error(ErrorCode::NonFiniteIterate,
                  "non-finite iterate in round " + std::to_string(t) + ": " +
                      e.what(),
                  t);
    }

    const Eigen::VectorXd Aw = data.A() * w;
    trace.totals.add(alpha, w, p.values(), Aw);
    trace.weight_sum += alpha;
    trace.weighted_w_sum += alpha * w;

    RoundRecord rec;
    rec.t = t;
    rec.alpha = alpha;
    rec.l1_delta_p = (p.values() - previous_p.values()).lpNorm<1>();
    trace.sum_sq_l1_delta_p += rec.l1_delta_p * rec.l1_delta_p;
    const Eigen::VectorXd avg = trace.weighted_w_sum / trace.weight_sum;
    rec.margin_avg = margin(data, avg);
    rec.normalized_margin = trace.weighted_w_sum.norm() > 0.0
                                ? normalized_margin(data, trace.weighted_w_sum)
                                : std::numeric_limits<double>::quiet_NaN();
    rec.regret_w = regret_w(trace.totals, data, config.objective, trace.comparator, q);
    rec.regret_p = regret_p(trace.totals);
    rec.gap_bound = (rec.regret_w + rec.regret_p) / trace.weight_sum;
    if (config.record_full_trace) {
      rec.w = w;
      rec.p = p.values();
      rec.w_secondary = wp.secondary();
      rec.p_secondary = pp.secondary().values();
    }
    trace.regret_w = rec.regret_w;
    trace.regret_p = rec.regret_p;
    trace.gap_bound = rec.gap_bound;
    trace.rounds.push_back(std::move(rec));

    trace.last_w = w;
    previous_p = p;
  }
  trace.last_p = previous_p;
  trace.w_bar = trace.weighted_w_sum / trace.weight_sum;
  return trace;
}

Eigen::VectorXd weighted_average(const Trace& trace) {
  if (trace.rounds.empty() || trace.rounds.front().w.size() == 0) {
    throw Error(ErrorCode::InvalidArgument,
                "weighted average needs a nonempty full trace");
  }
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(trace.rounds.front().w.size());
  double total = 0.0;
  for (const RoundRecord& r : trace.rounds) {
    sum += r.alpha * r.w;
    total += r.alpha;
  }
  return sum / total;
}

double weighted_regret_w(const Trace& trace, const Dataset& data,
                         GameObjective objective) {
  return regret_w(trace.totals, data, objective, trace.comparator,
                  comparator_q(trace.config));
}

double weighted_regret_p(const Trace& trace) { return regret_p(trace.totals); }

GapCheck gap_bound_check(const Trace& trace, const Dataset& data,
                         GameObjective objective, const Eigen::VectorXd& w) {
  GapCheck check;
  check.lhs = best_response_value(objective, data, w) -
              best_response_value(objective, data, trace.w_bar);
  check.rhs = (weighted_regret_w(trace, data, objective) +
               weighted_regret_p(trace)) /
              trace.weight_sum;
  check.ok = check.lhs <= check.rhs + Tolerances::bound_slack;
  return check;
}

}  // namespace nrp
