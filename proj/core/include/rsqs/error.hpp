#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rsqs {

enum class ErrorCode {
  kInvalidArgument,
  // lattice
  kOddTruncation,
  kTruncationTooSmall,
  kMemoryCapExceeded,
  kIndexOutOfRange,
  kZeroState,
  kBadMagic,
  kVersionMismatch,
  kTruncatedFile,
  kIoFailure,
  // spectral
  kRepresentationMismatch,
  kInvalidTolerance,
  kBoundDiverges,
  // propagate
  kPotentialEvalFailure,
  kNonFiniteNorm,
  kClockNotMonotone,
  kTooLargeForDense,
  // potentials
  kNonFinite,
  kDimensionNot3,
  // optimizer
  kPacketUnresolved,
  kNonPositiveArg,
  kSamplingDegenerate,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace rsqs
