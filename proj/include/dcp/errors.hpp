#pragma once

#include <stdexcept>
#include <string>

namespace dcp {

// Failure kinds raised by the library. The C API folds these into coarser
// status codes but keeps the kind name in the error message.
enum class ErrorCode {
  InvalidArgument,
  NestScaleTooLarge,
  SharesNotUnit,
  OrphanAlternative,
  NonPositiveInput,
  BadCount,
  WrongModelKind,
  BoundaryPoint,
  NoConvergence,
  NotClassA,
  TooLarge,
  OracleFailure,
  NoHistory,
  NegativeDemand,
  InfeasiblePrices,
  InfeasibleInstance,
  DimensionMismatch,
  ParseError,
  IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(error_code_name(code)) + ": " + message);
}

}  // namespace dcp
