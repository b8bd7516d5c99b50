#include "nrp/core.hpp"

#include <cmath>
#include <string>

#include "nrp/error.hpp"
#include "nrp/tolerances.hpp"

namespace nrp {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::RowNormViolation: return "RowNormViolation";
    case ErrorCode::BadLabel: return "BadLabel";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::UnsupportedGeometry: return "UnsupportedGeometry";
    case ErrorCode::NonFiniteIterate: return "NonFiniteIterate";
    case ErrorCode::IncompatibleConfig: return "IncompatibleConfig";
    case ErrorCode::RejectionBudget: return "RejectionBudget";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what, std::optional<long> index)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code),
      index_(index) {}

double lp_norm(const Eigen::VectorXd& x, double p) {
  const double scale = x.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  if (p == 2.0) return x.stableNorm();
  const double sum = (x.cwiseAbs().array() / scale).pow(p).sum();
  return scale * std::pow(sum, 1.0 / p);
}

double dual_exponent(double p) { return p / (p - 1.0); }

namespace {

void check_finite(const RowMatrix& m) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::NonFinite, "data matrix has non-finite entries");
  }
}

}  // namespace

Dataset::Dataset(RowMatrix signed_rows, Eigen::VectorXi labels,
                 double norm_exponent, std::optional<Certificate> certificate)
    : A_(std::move(signed_rows)),
      labels_(std::move(labels)),
      norm_exponent_(norm_exponent),
      cert_(std::move(certificate)) {
  if (A_.rows() < 1 || A_.cols() < 1) {
    throw Error(ErrorCode::InvalidArgument, "dataset needs n >= 1 and d >= 1");
  }
  if (labels_.size() != A_.rows()) {
    throw Error(ErrorCode::InvalidArgument, "label count does not match rows");
  }
  if (!(norm_exponent_ >= 2.0) || !std::isfinite(norm_exponent_)) {
    throw Error(ErrorCode::InvalidArgument, "norm exponent must lie in [2, inf)");
  }
  check_finite(A_);
  for (Eigen::Index i = 0; i < A_.rows(); ++i) {
    if (labels_[i] != 1 && labels_[i] != -1) {
      throw Error(ErrorCode::BadLabel, "label of row " + std::to_string(i), i);
    }
    if (lp_norm(A_.row(i).transpose(), norm_exponent_) >
        1.0 + Tolerances::invariant_slack) {
      throw Error(ErrorCode::RowNormViolation,
                  "row " + std::to_string(i) + " lies outside the unit ball", i);
    }
  }
  if (cert_) {
    if (!(cert_->known_margin > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "known margin must be positive");
    }
    if (cert_->w_star) {
      const Eigen::VectorXd& w = *cert_->w_star;
      if (w.size() != A_.cols() || !w.allFinite()) {
        throw Error(ErrorCode::InvalidArgument, "w_star has the wrong shape");
      }
      if (lp_norm(w, dual_exponent(norm_exponent_)) >
          1.0 + Tolerances::invariant_slack) {
        throw Error(ErrorCode::InvalidArgument, "w_star exceeds the dual unit ball");
      }
      if ((A_ * w).minCoeff() < cert_->known_margin - Tolerances::invariant_slack) {
        throw Error(ErrorCode::InvalidArgument,
                    "w_star does not attain the known margin");
      }
    }
  }
}

std::optional<double> Dataset::known_margin() const {
  if (!cert_) return std::nullopt;
  return cert_->known_margin;
}

const std::optional<Eigen::VectorXd>& Dataset::w_star() const {
  static const std::optional<Eigen::VectorXd> none;
  return cert_ ? cert_->w_star : none;
}

Eigen::VectorXd Dataset::features(Eigen::Index i) const {
  return static_cast<double>(labels_[i]) * A_.row(i).transpose();
}

Dataset build_dataset(const RowMatrix& features, const Eigen::VectorXi& labels,
                      double norm_exponent) {
  if (labels.size() != features.rows()) {
    throw Error(ErrorCode::InvalidArgument, "label count does not match rows");
  }
  RowMatrix signed_rows(features.rows(), features.cols());
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    if (labels[i] != 1 && labels[i] != -1) {
      throw Error(ErrorCode::BadLabel, "label of row " + std::to_string(i), i);
    }
    signed_rows.row(i) = static_cast<double>(labels[i]) * features.row(i);
  }
  return Dataset(std::move(signed_rows), labels, norm_exponent);
}

const char* to_string(GameObjective objective) {
  return objective == GameObjective::Bilinear ? "bilinear" : "l2";
}

MarginResult margin_with_row(const Dataset& data, const Eigen::VectorXd& w) {
  if (!w.allFinite()) {
    throw Error(ErrorCode::NonFinite, "non-finite classifier");
  }
  const Eigen::VectorXd scores = data.A() * w;
  MarginResult result{scores[0], 0};
  for (Eigen::Index i = 1; i < scores.size(); ++i) {
    if (scores[i] < result.value) result = {scores[i], i};
  }
  return result;
}

double margin(const Dataset& data, const Eigen::VectorXd& w) {
  return margin_with_row(data, w).value;
}

double normalized_margin(const Dataset& data, const Eigen::VectorXd& w) {
  const double norm = w.norm();
  if (norm == 0.0) {
    throw Error(ErrorCode::ZeroVector, "normalized margin of the zero vector");
  }
  return margin(data, w) / norm;
}

double game_value(GameObjective objective, const Dataset& data,
                  const Eigen::VectorXd& w, const SimplexPoint& p) {
  double value = p.values().dot(data.A() * w);
  if (objective == GameObjective::L2Regularized) value -= 0.5 * w.squaredNorm();
  return value;
}

double best_response_value(GameObjective objective, const Dataset& data,
                           const Eigen::VectorXd& w) {
  double value = margin(data, w);
  if (objective == GameObjective::L2Regularized) value -= 0.5 * w.squaredNorm();
  return value;
}

}  // namespace nrp
