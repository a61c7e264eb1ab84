#include "rsqs/error.hpp"

namespace rsqs {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kOddTruncation: return "OddTruncation";
    case ErrorCode::kTruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::kMemoryCapExceeded: return "MemoryCapExceeded";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kZeroState: return "ZeroState";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kRepresentationMismatch: return "RepresentationMismatch";
    case ErrorCode::kInvalidTolerance: return "InvalidTolerance";
    case ErrorCode::kBoundDiverges: return "BoundDiverges";
    case ErrorCode::kPotentialEvalFailure: return "PotentialEvalFailure";
    case ErrorCode::kNonFiniteNorm: return "NonFiniteNorm";
    case ErrorCode::kClockNotMonotone: return "ClockNotMonotone";
    case ErrorCode::kTooLargeForDense: return "TooLargeForDense";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kDimensionNot3: return "DimensionNot3";
    case ErrorCode::kPacketUnresolved: return "PacketUnresolved";
    case ErrorCode::kNonPositiveArg: return "NonPositiveArg";
    case ErrorCode::kSamplingDegenerate: return "SamplingDegenerate";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace rsqs
