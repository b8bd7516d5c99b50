#pragma once

#include <optional>

#include <Eigen/Dense>

#include "nrp/simplex.hpp"

namespace nrp {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// l_p norm for p in [1, inf); scaled by the largest magnitude so that large
// exponents neither overflow nor underflow.
double lp_norm(const Eigen::VectorXd& x, double p);

// Dual exponent q with 1/p + 1/q = 1.
double dual_exponent(double p);

// Label-signed data matrix A (row i is y_i * x_i) together with its norm
// regime and an optional margin certificate. Immutable once constructed.
class Dataset {
 public:
  struct Certificate {
    double known_margin = 0.0;
    bool exact_margin = false;
    std::optional<Eigen::VectorXd> w_star;
  };

  // Validates every invariant: finite entries, n, d >= 1, row norms within
  // the l_p unit ball, labels in {-1, +1}, and (if present) the certificate.
  Dataset(RowMatrix signed_rows, Eigen::VectorXi labels, double norm_exponent,
          std::optional<Certificate> certificate = std::nullopt);

  const RowMatrix& A() const { return A_; }
  const Eigen::VectorXi& labels() const { return labels_; }
  double norm_exponent() const { return norm_exponent_; }
  Eigen::Index n() const { return A_.rows(); }
  Eigen::Index d() const { return A_.cols(); }

  const std::optional<Certificate>& certificate() const { return cert_; }
  std::optional<double> known_margin() const;
  bool exact_margin() const { return cert_ && cert_->exact_margin; }
  const std::optional<Eigen::VectorXd>& w_star() const;

  // Original (unsigned) feature row i, i.e. labels_i * A_(i,:).
  Eigen::VectorXd features(Eigen::Index i) const;

 private:
  RowMatrix A_;
  Eigen::VectorXi labels_;
  double norm_exponent_;
  std::optional<Certificate> cert_;
};

// A_(i,:) = labels_i * features_(i,:). Rejects rather than rescales.
Dataset build_dataset(const RowMatrix& features, const Eigen::VectorXi& labels,
                      double norm_exponent);

enum class GameObjective { Bilinear, L2Regularized };

const char* to_string(GameObjective objective);

struct MarginResult {
  double value;
  Eigen::Index row;  // lowest index attaining the minimum
};

MarginResult margin_with_row(const Dataset& data, const Eigen::VectorXd& w);
double margin(const Dataset& data, const Eigen::VectorXd& w);
// margin(w) / ||w||_2; throws ZeroVector for w = 0.
double normalized_margin(const Dataset& data, const Eigen::VectorXd& w);

// g(w, p) = p^T A w, minus 0.5 ||w||^2 for the regularized objective.
double game_value(GameObjective objective, const Dataset& data,
                  const Eigen::VectorXd& w, const SimplexPoint& p);

// m(w) = min_p g(w, p); the minimum over the simplex sits at a vertex.
double best_response_value(GameObjective objective, const Dataset& data,
                           const Eigen::VectorXd& w);

}  // namespace nrp
