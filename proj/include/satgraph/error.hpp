#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace satgraph {

// Closed set of engine error codes. The spelling returned by to_string() is
// part of the wire contract and must not change between releases.
enum class ErrorCode {
  kInvalidArgument,
  kNotFound,
  kNoValidVersion,
  kNoTextUnit,
  kNoVersions,
  kMissingProvenance,
  kUnknownId,
  kDifferentItems,
  kNoComparableText,
  kNotAWork,
  kConflictingScope,
  kInvalidInterval,
  kValidationFailed,
  kDuplicateId,
  kParseError,
  kCycleDetected,
  kUnknownPrimitive,
  kBadBinding,
  kStepFailed,
  kAmbiguousResolution,
  kIoError,
};

inline constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kNoValidVersion: return "NoValidVersion";
    case ErrorCode::kNoTextUnit: return "NoTextUnit";
    case ErrorCode::kNoVersions: return "NoVersions";
    case ErrorCode::kMissingProvenance: return "MissingProvenance";
    case ErrorCode::kUnknownId: return "UnknownId";
    case ErrorCode::kDifferentItems: return "DifferentItems";
    case ErrorCode::kNoComparableText: return "NoComparableText";
    case ErrorCode::kNotAWork: return "NotAWork";
    case ErrorCode::kConflictingScope: return "ConflictingScope";
    case ErrorCode::kInvalidInterval: return "InvalidInterval";
    case ErrorCode::kValidationFailed: return "ValidationFailed";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kUnknownPrimitive: return "UnknownPrimitive";
    case ErrorCode::kBadBinding: return "BadBinding";
    case ErrorCode::kStepFailed: return "StepFailed";
    case ErrorCode::kAmbiguousResolution: return "AmbiguousResolution";
    case ErrorCode::kIoError: return "IoError";
  }
  return "InvalidArgument";
}

inline constexpr ErrorCode kAllErrorCodes[] = {
    ErrorCode::kInvalidArgument,   ErrorCode::kNotFound,
    ErrorCode::kNoValidVersion,    ErrorCode::kNoTextUnit,
    ErrorCode::kNoVersions,        ErrorCode::kMissingProvenance,
    ErrorCode::kUnknownId,         ErrorCode::kDifferentItems,
    ErrorCode::kNoComparableText,  ErrorCode::kNotAWork,
    ErrorCode::kConflictingScope,  ErrorCode::kInvalidInterval,
    ErrorCode::kValidationFailed,  ErrorCode::kDuplicateId,
    ErrorCode::kParseError,        ErrorCode::kCycleDetected,
    ErrorCode::kUnknownPrimitive,  ErrorCode::kBadBinding,
    ErrorCode::kStepFailed,        ErrorCode::kAmbiguousResolution,
    ErrorCode::kIoError,
};

// HTTP status class for each code. 5xx is reserved for transport faults.
inline constexpr int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
    case ErrorCode::kNoValidVersion:
    case ErrorCode::kNoTextUnit:
    case ErrorCode::kNoVersions:
    case ErrorCode::kMissingProvenance:
    case ErrorCode::kUnknownId:
      return 404;
    case ErrorCode::kConflictingScope:
    case ErrorCode::kDifferentItems:
    case ErrorCode::kNoComparableText:
    case ErrorCode::kNotAWork:
      return 409;
    case ErrorCode::kValidationFailed:
    case ErrorCode::kDuplicateId:
    case ErrorCode::kStepFailed:
    case ErrorCode::kAmbiguousResolution:
      return 422;
    default:
      return 400;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message,
        std::map<std::string, std::string> details = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        message_(std::move(message)),
        details_(std::move(details)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }
  const std::map<std::string, std::string>& details() const noexcept {
    return details_;
  }

 private:
  ErrorCode code_;
  std::string message_;
  std::map<std::string, std::string> details_;
};

[[noreturn]] inline void fail(ErrorCode code, std::string message,
                              std::map<std::string, std::string> details = {}) {
  throw Error(code, std::move(message), std::move(details));
}

}  // namespace satgraph
