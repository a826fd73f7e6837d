#include "pencil/error.hpp"

namespace pencil {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::NotExact: return "NotExact";
    case ErrorCode::SingularMetric: return "SingularMetric";
    case ErrorCode::NonSquareCurvature: return "NonSquareCurvature";
    case ErrorCode::NotPoisson: return "NotPoisson";
    case ErrorCode::NonConstantGauge: return "NonConstantGauge";
    case ErrorCode::NotIntegrable: return "NotIntegrable";
    case ErrorCode::NonZeroMean: return "NonZeroMean";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::Schema: return "Schema";
    case ErrorCode::NonSymmetricEta: return "NonSymmetricEta";
    case ErrorCode::SingularEta: return "SingularEta";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace pencil
