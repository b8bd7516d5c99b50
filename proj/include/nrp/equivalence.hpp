#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nrp/core.hpp"
#include "nrp/tolerances.hpp"

namespace nrp {

enum class EquivalenceKind { Prop1, Prop2, Nag, Mpfp };

const char* to_string(EquivalenceKind kind);
// Accepts "prop1", "prop2", "nag", "mpfp"; throws InvalidArgument otherwise.
EquivalenceKind parse_equivalence_kind(const std::string& text);

struct QuantityDeviation {
  std::string name;
  double abs_dev = 0.0;  // max over compared entries (and rounds)
  double scale = 0.0;    // ||reference||_inf at the worst entry's round
  double rel_dev = 0.0;  // abs_dev / scale (0 when scale = 0)
  bool pass = true;      // abs_dev <= max(tol * scale, abs floor), per round
};

struct EquivalenceReport {
  EquivalenceKind kind = EquivalenceKind::Prop1;
  int T = 0;
  double tol = 0.0;
  std::vector<QuantityDeviation> quantities;
  bool pass = true;
};

// Compares `a` against reference `b` and folds the result into `q`.
void accumulate_deviation(QuantityDeviation& q, const Eigen::VectorXd& a,
                          const Eigen::VectorXd& b, double tol,
                          double abs_floor = Tolerances::equivalence_abs_floor);

// Runs an original algorithm and its game-dynamics form side by side.
// `perturb` scales the dynamics p-learner step size by (1 + perturb); it
// exists to demonstrate that the checker can fail.
EquivalenceReport check_equivalence(EquivalenceKind kind, const Dataset& data,
                                    int T,
                                    double tol = Tolerances::equivalence_rel_tol,
                                    double perturb = 0.0);

}  // namespace nrp
