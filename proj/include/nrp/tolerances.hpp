#pragma once

namespace nrp {

// Numerical slack shared by every module. Changing a value here changes the
// contract of the invariant checks that use it.
struct Tolerances {
  // Row-norm bound, certificate norm and margin certificate checks.
  static constexpr double invariant_slack = 1e-12;
  // Simplex coordinates must sum to one within this slack.
  static constexpr double simplex_sum_slack = 1e-12;
  // Multiplicative simplex updates floor each unnormalized weight here.
  static constexpr double underflow_floor = 1e-300;
  // Slack for "regret is nonnegative" and gap-bound comparisons.
  static constexpr double bound_slack = 1e-9;
  // Default relative tolerance and absolute floor for equivalence checks.
  static constexpr double equivalence_rel_tol = 1e-8;
  static constexpr double equivalence_abs_floor = 1e-10;
};

}  // namespace nrp
