#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aistrack {

enum class ErrorCode {
  // decoder
  ChecksumMismatch,
  MalformedFraming,
  UnknownTalker,
  MissingFragment,
  DuplicateFragment,
  TruncatedPayload,
  OutOfRangeField,
  // ingest
  FileUnreadable,
  SchemaMismatch,
  // geo / metrics
  PolarRegion,
  ZeroTimeGap,
  // quantiles
  EmptyBin,
  NoStaticData,
  AlphaOutOfRange,
  SchemaVersionMismatch,
  // assess / export
  DegenerateTrajectory,
  IoFailure,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace aistrack
