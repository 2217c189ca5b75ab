#include "msrsim/errors.hpp"

namespace msrsim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::SubnetMismatch: return "SubnetMismatch";
    case ErrorCode::MetricOutOfRange: return "MetricOutOfRange";
    case ErrorCode::AddressInUse: return "AddressInUse";
    case ErrorCode::UnknownReference: return "UnknownReference";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::InterfaceDown: return "InterfaceDown";
    case ErrorCode::SubnetExhausted: return "SubnetExhausted";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::ModeMismatch: return "ModeMismatch";
    case ErrorCode::UnknownInterface: return "UnknownInterface";
    case ErrorCode::UnknownTeid: return "UnknownTeid";
    case ErrorCode::InvalidRule: return "InvalidRule";
    case ErrorCode::TimeInPast: return "TimeInPast";
    case ErrorCode::UnknownTarget: return "UnknownTarget";
    case ErrorCode::UnknownRouter: return "UnknownRouter";
    case ErrorCode::UnknownAddress: return "UnknownAddress";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace msrsim
