#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>

namespace ac1 {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

// Machine-readable failure categories. The CLI maps them to exit codes.
enum class ErrorCode {
  InvalidFace,
  DuplicateFace,
  NonManifoldEdge,
  KissingVertex,
  InconsistentOrientation,
  HangingNode,
  DesignatedCornerNotOnBoundary,
  FaceOutOfRange,
  DegenerateProjection,
  ZeroNormal,
  CollinearPoints,
  DegenerateTriangle,
  NegativeBarycentric,
  InvalidBoundaryConfiguration,
  UnsupportedValence,
  AmbiguousAssignment,
  SingularJacobian,
  SingularBoundaryMass,
  SingularMass,
  SolverBreakdown,
  NoConvergence,
  ParseError,
  InvalidArgument,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// True for errors caused by invalid mesh input (as opposed to numerics or I/O).
bool is_mesh_error(ErrorCode code);

}  // namespace ac1
