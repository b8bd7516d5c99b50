#include "nrp/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "nrp/error.hpp"

namespace nrp {

const char* to_string(GenMode mode) {
  switch (mode) {
    case GenMode::LowerBound: return "lower";
    case GenMode::ExactMargin: return "exact";
    case GenMode::Infeasible: return "infeasible";
  }
  return "unknown";
}

GenMode parse_gen_mode(const std::string& text) {
  for (GenMode m : {GenMode::LowerBound, GenMode::ExactMargin, GenMode::Infeasible}) {
    if (text == to_string(m)) return m;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown generator mode '" + text + "'");
}

void GenSpec::validate() const {
  if (n < 1 || d < 1) throw Error(ErrorCode::InvalidArgument, "n and d must be >= 1");
  if (!(norm_exponent >= 2.0) || !std::isfinite(norm_exponent)) {
    throw Error(ErrorCode::InvalidArgument, "norm exponent must be a finite p >= 2");
  }
  switch (mode) {
    case GenMode::ExactMargin:
      if (d < 2 || n < 2) {
        throw Error(ErrorCode::InvalidArgument, "exact-margin data needs n, d >= 2");
      }
      if (norm_exponent != 2.0) {
        throw Error(ErrorCode::InvalidArgument, "exact-margin data is l2 only");
      }
      [[fallthrough]];
    case GenMode::LowerBound:
      if (!(gamma > 0.0 && gamma < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "gamma must lie in (0, 1)");
      }
      break;
    case GenMode::Infeasible:
      if (d < 2 || n < 3) {
        throw Error(ErrorCode::InvalidArgument, "infeasible data needs n >= 3, d >= 2");
      }
      break;
  }
}

namespace {

using Rng = std::mt19937_64;

Eigen::VectorXd gaussian_vector(Rng& rng, Eigen::Index d) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = normal(rng);
  return v;
}

// Uniform point of the unit l_p ball via the generalized Gaussian method.
Eigen::VectorXd uniform_in_p_ball(Rng& rng, Eigen::Index d, double p) {
  std::gamma_distribution<double> gamma(1.0 / p, 1.0);
  std::exponential_distribution<double> expo(1.0);
  std::bernoulli_distribution coin(0.5);
  Eigen::VectorXd y(d);
  double mass = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double g = gamma(rng);
    y[i] = (coin(rng) ? 1.0 : -1.0) * std::pow(g, 1.0 / p);
    mass += g;
  }
  return y / std::pow(mass + expo(rng), 1.0 / p);
}

int random_label(Rng& rng) {
  std::bernoulli_distribution coin(0.5);
  return coin(rng) ? 1 : -1;
}

Dataset lower_bound(const GenSpec& spec, Rng& rng) {
  const double p = spec.norm_exponent;
  const double q = dual_exponent(p);
  Eigen::VectorXd w_star = gaussian_vector(rng, spec.d);
  w_star /= lp_norm(w_star, q);

  RowMatrix features(spec.n, spec.d);
  Eigen::VectorXi labels(spec.n);
  Eigen::Index accepted = 0;
  long draws = 0;
  while (accepted < spec.n) {
    if (++draws > kRejectionBudget) {
      throw Error(ErrorCode::RejectionBudget,
                  "rejection sampling stalled; gamma is too large for this p and d");
    }
    const Eigen::VectorXd x = uniform_in_p_ball(rng, spec.d, p);
    const double s = w_star.dot(x);
    if (std::abs(s) < spec.gamma) continue;
    features.row(accepted) = x.transpose();
    labels[accepted] = s > 0.0 ? 1 : -1;
    ++accepted;
  }
  RowMatrix signed_rows = features;
  for (Eigen::Index i = 0; i < spec.n; ++i) signed_rows.row(i) *= labels[i];
  return Dataset(std::move(signed_rows), labels, p,
                 Dataset::Certificate{spec.gamma, false, w_star});
}

Dataset exact_margin(const GenSpec& spec, Rng& rng) {
  const double g = spec.gamma;
  const double beta = std::sqrt(1.0 - g * g);
  const double spread = std::min(0.1, 0.5 * (1.0 - g));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Eigen::VectorXd> rows;
  rows.reserve(static_cast<std::size_t>(spec.n));
  Eigen::VectorXd r = Eigen::VectorXd::Zero(spec.d);
  r[0] = g;
  r[1] = beta;
  rows.push_back(r);
  r[1] = -beta;
  rows.push_back(r);
  for (Eigen::Index k = 2; k < spec.n; ++k) {
    // 1 - U lies in (0, 1], so the first coordinate strictly exceeds gamma.
    const double x1 = g + spread * (1.0 - unit(rng));
    Eigen::VectorXd tail = gaussian_vector(rng, spec.d - 1);
    const double tail_norm = tail.norm();
    if (tail_norm == 0.0) tail[0] = 1.0; else tail /= tail_norm;
    Eigen::VectorXd row(spec.d);
    row[0] = x1;
    row.tail(spec.d - 1) = std::sqrt(std::max(0.0, 1.0 - x1 * x1)) * tail;
    rows.push_back(row);
  }
  std::shuffle(rows.begin(), rows.end(), rng);

  RowMatrix signed_rows(spec.n, spec.d);
  Eigen::VectorXi labels(spec.n);
  for (Eigen::Index i = 0; i < spec.n; ++i) {
    labels[i] = random_label(rng);
    signed_rows.row(i) = rows[static_cast<std::size_t>(i)].transpose();
  }
  Eigen::VectorXd w_star = Eigen::VectorXd::Zero(spec.d);
  w_star[0] = 1.0;
  return Dataset(std::move(signed_rows), labels, 2.0,
                 Dataset::Certificate{g, true, w_star});
}

}  // namespace

Dataset gen_separable(const GenSpec& spec) {
  spec.validate();
  if (spec.mode == GenMode::Infeasible) {
    throw Error(ErrorCode::InvalidArgument, "gen_separable called in infeasible mode");
  }
  Rng rng(spec.seed);
  return spec.mode == GenMode::LowerBound ? lower_bound(spec, rng)
                                          : exact_margin(spec, rng);
}

Dataset gen_infeasible(const GenSpec& spec) {
  spec.validate();
  if (spec.mode != GenMode::Infeasible) {
    throw Error(ErrorCode::InvalidArgument, "gen_infeasible needs infeasible mode");
  }
  Rng rng(spec.seed);
  Eigen::VectorXd u = gaussian_vector(rng, spec.d);
  u /= u.norm();
  Eigen::VectorXd v = gaussian_vector(rng, spec.d);
  v -= v.dot(u) * u;
  v -= v.dot(u) * u;
  v /= v.norm();

  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> radius(0.5, 1.0);
  std::vector<Eigen::VectorXd> rows;
  for (int k = 0; k < 3; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 3.0;
    rows.push_back(std::cos(a) * u + std::sin(a) * v);
  }
  for (Eigen::Index k = 3; k < spec.n; ++k) {
    const double a = angle(rng);
    rows.push_back(radius(rng) * (std::cos(a) * u + std::sin(a) * v));
  }
  std::shuffle(rows.begin(), rows.end(), rng);

  RowMatrix signed_rows(spec.n, spec.d);
  Eigen::VectorXi labels(spec.n);
  for (Eigen::Index i = 0; i < spec.n; ++i) {
    // Row norms are one up to rounding; pull them inside the ball exactly.
    Eigen::VectorXd row = rows[static_cast<std::size_t>(i)];
    const double norm = row.norm();
    if (norm > 1.0) row /= norm;
    labels[i] = random_label(rng);
    signed_rows.row(i) = row.transpose();
  }
  return Dataset(std::move(signed_rows), labels, spec.norm_exponent);
}

Dataset generate(const GenSpec& spec) {
  return spec.mode == GenMode::Infeasible ? gen_infeasible(spec) : gen_separable(spec);
}

}  // namespace nrp
