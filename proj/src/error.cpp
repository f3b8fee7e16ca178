#include "cnoidal/error.hpp"

namespace cnoidal {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonDistinctBranchPoints: return "NonDistinctBranchPoints";
    case ErrorCode::TraceNotZero: return "TraceNotZero";
    case ErrorCode::UnorderedBranchPoints: return "UnorderedBranchPoints";
    case ErrorCode::ModulusOutOfRange: return "ModulusOutOfRange";
    case ErrorCode::LatticePoint: return "LatticePoint";
    case ErrorCode::SpectrumInGap: return "SpectrumInGap";
    case ErrorCode::TooCloseToBranchPoint: return "TooCloseToBranchPoint";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DuplicateSpectralPoint: return "DuplicateSpectralPoint";
    case ErrorCode::EmptySpectrum: return "EmptySpectrum";
    case ErrorCode::NonRealTau: return "NonRealTau";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NonSymmetricPeriodMatrix: return "NonSymmetricPeriodMatrix";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularConfiguration: return "SingularConfiguration";
    case ErrorCode::UnorderedVelocities: return "UnorderedVelocities";
    case ErrorCode::FitDiverged: return "FitDiverged";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::ZeroDensityNode: return "ZeroDensityNode";
    case ErrorCode::InvalidSupport: return "InvalidSupport";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorCode::CoincidentSolitons: return "CoincidentSolitons";
    case ErrorCode::BackgroundThetaZero: return "BackgroundThetaZero";
    case ErrorCode::BranchPointLimit: return "BranchPointLimit";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::EqualVelocities: return "EqualVelocities";
    case ErrorCode::DiagonalSingularity: return "DiagonalSingularity";
  }
  return "UnknownError";
}

}  // namespace cnoidal
