#include "dcp/errors.hpp"

namespace dcp {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NestScaleTooLarge: return "NestScaleTooLarge";
    case ErrorCode::SharesNotUnit: return "SharesNotUnit";
    case ErrorCode::OrphanAlternative: return "OrphanAlternative";
    case ErrorCode::NonPositiveInput: return "NonPositiveInput";
    case ErrorCode::BadCount: return "BadCount";
    case ErrorCode::WrongModelKind: return "WrongModelKind";
    case ErrorCode::BoundaryPoint: return "BoundaryPoint";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotClassA: return "NotClassA";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::OracleFailure: return "OracleFailure";
    case ErrorCode::NoHistory: return "NoHistory";
    case ErrorCode::NegativeDemand: return "NegativeDemand";
    case ErrorCode::InfeasiblePrices: return "InfeasiblePrices";
    case ErrorCode::InfeasibleInstance: return "InfeasibleInstance";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace dcp
