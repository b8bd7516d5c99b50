#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace nrp {

enum class ErrorCode {
  RowNormViolation,
  BadLabel,
  NonFinite,
  ZeroVector,
  Degenerate,
  UnsupportedGeometry,
  NonFiniteIterate,
  IncompatibleConfig,
  RejectionBudget,
  InvalidArgument,
  Parse,
};

const char* to_string(ErrorCode code);

// Every library failure is reported through this exception. `index` carries the
// offending row (RowNormViolation, BadLabel) or round (NonFiniteIterate).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<long> index = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<long> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<long> index_;
};

}  // namespace nrp
