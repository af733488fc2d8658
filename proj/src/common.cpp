#include "ac1/common.hpp"

namespace ac1 {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidFace: return "InvalidFace";
    case ErrorCode::DuplicateFace: return "DuplicateFace";
    case ErrorCode::NonManifoldEdge: return "NonManifoldEdge";
    case ErrorCode::KissingVertex: return "KissingVertex";
    case ErrorCode::InconsistentOrientation: return "InconsistentOrientation";
    case ErrorCode::HangingNode: return "HangingNode";
    case ErrorCode::DesignatedCornerNotOnBoundary: return "DesignatedCornerNotOnBoundary";
    case ErrorCode::FaceOutOfRange: return "FaceOutOfRange";
    case ErrorCode::DegenerateProjection: return "DegenerateProjection";
    case ErrorCode::ZeroNormal: return "ZeroNormal";
    case ErrorCode::CollinearPoints: return "CollinearPoints";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::NegativeBarycentric: return "NegativeBarycentric";
    case ErrorCode::InvalidBoundaryConfiguration: return "InvalidBoundaryConfiguration";
    case ErrorCode::UnsupportedValence: return "UnsupportedValence";
    case ErrorCode::AmbiguousAssignment: return "AmbiguousAssignment";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::SingularBoundaryMass: return "SingularBoundaryMass";
    case ErrorCode::SingularMass: return "SingularMass";
    case ErrorCode::SolverBreakdown: return "SolverBreakdown";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool is_mesh_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidFace:
    case ErrorCode::DuplicateFace:
    case ErrorCode::NonManifoldEdge:
    case ErrorCode::KissingVertex:
    case ErrorCode::InconsistentOrientation:
    case ErrorCode::HangingNode:
    case ErrorCode::DesignatedCornerNotOnBoundary:
      return true;
    default:
      return false;
  }
}

}  // namespace ac1
