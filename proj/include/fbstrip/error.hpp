#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fbstrip {

enum class ErrorCode {
  InvalidArgument,
  Degenerate,
  NoSolution,
  DeltaTooLarge,
  BoundaryViolation,
  SingularMask,
  BracketInvalid,
  ParseError,
};

inline std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::DeltaTooLarge: return "DeltaTooLarge";
    case ErrorCode::BoundaryViolation: return "BoundaryViolation";
    case ErrorCode::SingularMask: return "SingularMask";
    case ErrorCode::BracketInvalid: return "BracketInvalid";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Library-wide exception. The code lets callers (and the CLI) branch on the
/// failure kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace fbstrip
