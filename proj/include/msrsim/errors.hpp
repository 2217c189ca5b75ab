#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace msrsim {

enum class ErrorCode {
  DuplicateName,
  SubnetMismatch,
  MetricOutOfRange,
  AddressInUse,
  UnknownReference,
  InvariantViolation,
  SyntaxError,
  InterfaceDown,
  SubnetExhausted,
  UnknownSession,
  ModeMismatch,
  UnknownInterface,
  UnknownTeid,
  InvalidRule,
  TimeInPast,
  UnknownTarget,
  UnknownRouter,
  UnknownAddress,
};

std::string_view to_string(ErrorCode code);

/// Every recoverable failure in the simulator is reported as an Error carrying
/// one of the codes above; callers branch on code(), never on the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace msrsim
