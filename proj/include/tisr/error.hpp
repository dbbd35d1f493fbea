#pragma once

#include <stdexcept>
#include <string>

namespace tisr {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  OutOfBounds,
  UnsupportedFormat,
  MalformedHeader,
  TruncatedPayload,
  UnsupportedMaxval,
  Io,
  NotConverged,
  Breakdown,
  DegenerateInput,
  Config,
};

const char* to_string(ErrorCode code);

/// Exception carrying a machine-checkable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tisr
