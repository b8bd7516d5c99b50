#pragma once

#include <Eigen/Dense>

namespace nrp {

// A point of the probability simplex: nonnegative coordinates summing to one.
class SimplexPoint {
 public:
  // Validates the simplex invariants; throws Error otherwise.
  explicit SimplexPoint(Eigen::VectorXd values);

  static SimplexPoint uniform(Eigen::Index n);
  // Vertex e_i of the n-simplex.
  static SimplexPoint vertex(Eigen::Index n, Eigen::Index i);
  // Divides nonnegative weights by their sum. Throws Degenerate when the sum is
  // not positive and finite.
  static SimplexPoint normalize(const Eigen::VectorXd& weights);

  const Eigen::VectorXd& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }
  double operator[](Eigen::Index i) const { return values_[i]; }

 private:
  SimplexPoint() = default;
  Eigen::VectorXd values_;
};

// Gibbs distribution p_i ∝ exp(-potential_i), computed by shifting the
// potentials by their minimum before exponentiating. Every softmax in the
// library goes through this function so that alternative derivations of the
// same iterate share one roundoff path. Throws NonFinite on non-finite input.
SimplexPoint gibbs(const Eigen::VectorXd& potential);

// Entropic prox step on the simplex: p_i ∝ center_i * exp(-step_i).
// Requires a strictly positive center (Degenerate otherwise); unnormalized
// weights are floored at Tolerances::underflow_floor before normalization.
SimplexPoint entropic_prox(const SimplexPoint& center,
                           const Eigen::VectorXd& step);

// Euclidean projection onto the unit l2 ball.
Eigen::VectorXd project_unit_ball(const Eigen::VectorXd& v);

// Negative entropy E(p) = sum p_i log p_i and KL(p || q).
double negative_entropy(const Eigen::VectorXd& p);
double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

}  // namespace nrp
