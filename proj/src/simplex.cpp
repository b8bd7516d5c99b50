#include "nrp/simplex.hpp"

#include <cmath>
#include <string>

#include "nrp/error.hpp"
#include "nrp/tolerances.hpp"

namespace nrp {

SimplexPoint::SimplexPoint(Eigen::VectorXd values) : values_(std::move(values)) {
  if (values_.size() == 0) {
    throw Error(ErrorCode::InvalidArgument, "simplex point has no coordinates");
  }
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
      throw Error(ErrorCode::InvalidArgument,
                  "simplex coordinate " + std::to_string(i) +
                      " is negative or not finite");
    }
  }
  if (std::abs(values_.sum() - 1.0) > Tolerances::simplex_sum_slack) {
    throw Error(ErrorCode::InvalidArgument,
                "simplex coordinates do not sum to one");
  }
}

SimplexPoint SimplexPoint::uniform(Eigen::Index n) {
  SimplexPoint p;
  p.values_ = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  return p;
}

SimplexPoint SimplexPoint::vertex(Eigen::Index n, Eigen::Index i) {
  SimplexPoint p;
  p.values_ = Eigen::VectorXd::Zero(n);
  p.values_[i] = 1.0;
  return p;
}

SimplexPoint SimplexPoint::normalize(const Eigen::VectorXd& weights) {
  const double total = weights.sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw Error(ErrorCode::Degenerate, "cannot normalize simplex weights");
  }
  SimplexPoint p;
  p.values_ = weights / total;
  return p;
}

SimplexPoint gibbs(const Eigen::VectorXd& potential) {
  if (!potential.allFinite()) {
    throw Error(ErrorCode::NonFinite, "non-finite potential in gibbs()");
  }
  const double shift = potential.minCoeff();
  Eigen::VectorXd weights = (-(potential.array() - shift)).exp().matrix();
  return SimplexPoint::normalize(weights);
}

SimplexPoint entropic_prox(const SimplexPoint& center,
                           const Eigen::VectorXd& step) {
  const Eigen::VectorXd& c = center.values();
  if ((c.array() <= 0.0).any()) {
    throw Error(ErrorCode::Degenerate, "entropic prox center has a zero coordinate");
  }
  if (!step.allFinite()) {
    throw Error(ErrorCode::NonFinite, "non-finite step in entropic prox");
  }
  Eigen::VectorXd potential = step.array() - c.array().log();
  const double shift = potential.minCoeff();
  Eigen::VectorXd weights = (-(potential.array() - shift))
                                .exp()
                                .max(Tolerances::underflow_floor)
                                .matrix();
  return SimplexPoint::normalize(weights);
}

Eigen::VectorXd project_unit_ball(const Eigen::VectorXd& v) {
  const double norm = v.norm();
  if (norm <= 1.0) return v;
  return v / norm;
}

double negative_entropy(const Eigen::VectorXd& p) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) sum += p[i] * std::log(p[i]);
  }
  return sum;
}

double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) sum += p[i] * std::log(p[i] / q[i]);
  }
  return sum;
}

}  // namespace nrp
