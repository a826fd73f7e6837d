#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pencil {

/// Machine-readable failure categories. The string form returned by
/// error_code_name() is stable and is what the CLI reports.
enum class ErrorCode {
  DimensionMismatch,
  IndexOutOfRange,
  DivisionByZero,
  NotExact,
  SingularMetric,
  NonSquareCurvature,
  NotPoisson,
  NonConstantGauge,
  NotIntegrable,
  NonZeroMean,
  NonFinite,
  InvalidGrid,
  Schema,
  NonSymmetricEta,
  SingularEta,
  Io,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pencil
