#pragma once

#include <stdexcept>
#include <string>

namespace cnoidal {

enum class ErrorCode {
  NonDistinctBranchPoints,
  TraceNotZero,
  UnorderedBranchPoints,
  ModulusOutOfRange,
  LatticePoint,
  SpectrumInGap,
  TooCloseToBranchPoint,
  NonConvergence,
  DuplicateSpectralPoint,
  EmptySpectrum,
  NonRealTau,
  NotPositiveDefinite,
  NonSymmetricPeriodMatrix,
  DimensionMismatch,
  SingularConfiguration,
  UnorderedVelocities,
  FitDiverged,
  GridTooCoarse,
  SingularSystem,
  ZeroDensityNode,
  InvalidSupport,
  InvalidArgument,
  TruncationInsufficient,
  CoincidentSolitons,
  BackgroundThetaZero,
  BranchPointLimit,
  BracketFailure,
  EqualVelocities,
  DiagonalSingularity,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }
  const char* name() const { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace cnoidal
