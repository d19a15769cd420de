#include "aistrack/error.hpp"

namespace aistrack {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::MalformedFraming: return "MalformedFraming";
    case ErrorCode::UnknownTalker: return "UnknownTalker";
    case ErrorCode::MissingFragment: return "MissingFragment";
    case ErrorCode::DuplicateFragment: return "DuplicateFragment";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::OutOfRangeField: return "OutOfRangeField";
    case ErrorCode::FileUnreadable: return "FileUnreadable";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::PolarRegion: return "PolarRegion";
    case ErrorCode::ZeroTimeGap: return "ZeroTimeGap";
    case ErrorCode::EmptyBin: return "EmptyBin";
    case ErrorCode::NoStaticData: return "NoStaticData";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::DegenerateTrajectory: return "DegenerateTrajectory";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace aistrack
