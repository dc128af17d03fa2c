#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tgplan {

enum class ErrorKind {
  InvalidPolygon,
  VerticalSlope,
  OverlappingObstacles,
  SolverFailure,
  PointInsideObstacle,
  NoPath,
  OutOfRange,
  InfeasibleTerminalSpeeds,
  TanhDomain,
  Unreachable,
  InfeasibleEndpoints,
  ControlBoundViolation,
  CapExceeded,
  InvalidScenario,
};

std::string_view toString(ErrorKind kind);

/// Single exception type for the planner; `kind()` identifies the failed contract.
class PlanError : public std::runtime_error {
 public:
  PlanError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(toString(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace tgplan
