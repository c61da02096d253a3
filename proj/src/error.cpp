#include "ucap/error.hpp"

namespace ucap {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::NegativeSignal: return "NegativeSignal";
    case ErrorCode::GapExceedsEnergy: return "GapExceedsEnergy";
    case ErrorCode::NegativeRequest: return "NegativeRequest";
    case ErrorCode::PositiveRequest: return "PositiveRequest";
    case ErrorCode::UnknownPolicy: return "UnknownPolicy";
    case ErrorCode::StreamingNonCausal: return "StreamingNonCausal";
    case ErrorCode::DegenerateRates: return "DegenerateRates";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::TraceFormat: return "TraceFormat";
    case ErrorCode::FleetFormat: return "FleetFormat";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
  }
  return "Unknown";
}

bool Error::is_validation() const noexcept {
  switch (code_) {
    case ErrorCode::UnknownPolicy:
    case ErrorCode::StreamingNonCausal:
    case ErrorCode::DegenerateRates:
    case ErrorCode::LengthMismatch:
    case ErrorCode::ConfigInvalid:
    case ErrorCode::TraceFormat:
    case ErrorCode::FleetFormat:
    case ErrorCode::NegativeSignal:
      return true;
    default:
      return false;
  }
}

}  // namespace ucap
