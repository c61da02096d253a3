#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ucap {

enum class ErrorCode {
  PreconditionViolation,
  NegativeSignal,
  GapExceedsEnergy,
  NegativeRequest,
  PositiveRequest,
  UnknownPolicy,
  StreamingNonCausal,
  DegenerateRates,
  LengthMismatch,
  ConfigInvalid,
  TraceFormat,
  FleetFormat,
  TooFewSamples,
};

std::string_view to_string(ErrorCode code);

// Every library failure is reported through this type; `code()` identifies
// which contract was broken.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  // Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

  // Input/validation errors map to CLI exit code 1, everything else to 2.
  bool is_validation() const noexcept;

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace ucap
