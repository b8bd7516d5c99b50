#pragma once

#include <cstdint>
#include <string>

#include "nrp/core.hpp"

namespace nrp {

enum class GenMode { LowerBound, ExactMargin, Infeasible };

const char* to_string(GenMode mode);
// Accepts "lower", "exact", "infeasible".
GenMode parse_gen_mode(const std::string& text);

struct GenSpec {
  Eigen::Index n = 16;
  Eigen::Index d = 4;
  double gamma = 0.3;
  double norm_exponent = 2.0;
  GenMode mode = GenMode::ExactMargin;
  std::uint64_t seed = 0;

  // Throws InvalidArgument on out-of-range fields.
  void validate() const;
};

// Draws attempted by LowerBound rejection sampling before giving up.
inline constexpr long kRejectionBudget = 4'000'000;

// LowerBound: w* uniform on the unit q-sphere directionally, points uniform in
// the unit p-ball, labelled by sign(w*.x) and kept only if |w*.x| >= gamma.
// ExactMargin (p = 2): rows (gamma, +-sqrt(1 - gamma^2), 0, ...) plus n - 2
// unit rows with first coordinate in (gamma, gamma + 0.1]; maximal margin is
// gamma at w* = e_1. Rows are shuffled and carry random labels.
Dataset gen_separable(const GenSpec& spec);

// Three unit rows at 0, 120 and 240 degrees in a random 2-plane plus n - 3
// further in-plane rows, so the origin lies in the convex hull.
Dataset gen_infeasible(const GenSpec& spec);

// Dispatches on spec.mode.
Dataset generate(const GenSpec& spec);

}  // namespace nrp
