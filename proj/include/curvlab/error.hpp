#pragma once

#include <stdexcept>
#include <string>

namespace curvlab {

enum class ErrorCode {
  SingularChartPoint,
  CutLocus,
  ZeroVector,
  GridTooCoarse,
  SolverDiverged,
  NewtonStalled,
  NonPositiveSolution,
  DegenerateTangency,
  NotApplicable,
  ZeroOnCircle,
  IdenticallyZero,
  RefinementFailed,
  ProfileInvalid,
  MultiplicityAmbiguous,
  InvalidArgument,
};

const char* error_code_name(ErrorCode code);

/// Exception carrying one of the library's named error conditions.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace curvlab
