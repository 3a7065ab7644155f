#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace batesqc {

enum class ErrorCode {
  InvalidFormat,
  Overflow,
  ParseError,
  DuplicateBates,
  MixedPrefix,
  MissingColumn,
  DegenerateRegion,
  ImageDecode,
  EngineFailure,
  Timeout,
  BackendUnavailable,
  PrefixNotFound,
  RangeInvalid,
  InconsistentInput,
  FatalConfig,
  IoError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidFormat: return "InvalidFormat";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateBates: return "DuplicateBates";
    case ErrorCode::MixedPrefix: return "MixedPrefix";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::DegenerateRegion: return "DegenerateRegion";
    case ErrorCode::ImageDecode: return "ImageDecode";
    case ErrorCode::EngineFailure: return "EngineFailure";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::PrefixNotFound: return "PrefixNotFound";
    case ErrorCode::RangeInvalid: return "RangeInvalid";
    case ErrorCode::InconsistentInput: return "InconsistentInput";
    case ErrorCode::FatalConfig: return "FatalConfig";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace batesqc
