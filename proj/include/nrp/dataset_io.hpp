#pragma once

#include <iosfwd>
#include <string>

#include "nrp/core.hpp"

namespace nrp {

// Plain-text dataset format:
//
//   n d p
//   y x_1 ... x_d          (n lines, y in {-1, 1})
//   # known_margin=<real>  (optional trailing metadata)
//   # exact=<0|1>
//   # w_star=<c_1>,<c_2>,...,<c_d>
//
// Reals are written with 17 significant digits so a write/read cycle is exact.
void write_dataset(std::ostream& out, const Dataset& data);
void write_dataset_file(const std::string& path, const Dataset& data);

// Throws Error(Parse) on malformed text and the usual Dataset errors on
// invariant violations.
Dataset read_dataset(std::istream& in);
Dataset read_dataset_file(const std::string& path);

// "%.17g" formatting used by every text and CSV writer.
std::string format_real(double value);

}  // namespace nrp
