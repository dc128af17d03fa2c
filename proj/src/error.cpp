#include "tgplan/error.hpp"

namespace tgplan {

std::string_view toString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidPolygon: return "invalid-polygon";
    case ErrorKind::VerticalSlope: return "vertical-slope";
    case ErrorKind::OverlappingObstacles: return "overlapping-obstacles";
    case ErrorKind::SolverFailure: return "solver-failure";
    case ErrorKind::PointInsideObstacle: return "point-inside-obstacle";
    case ErrorKind::NoPath: return "no-path";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::InfeasibleTerminalSpeeds: return "infeasible-terminal-speeds";
    case ErrorKind::TanhDomain: return "tanh-domain";
    case ErrorKind::Unreachable: return "unreachable";
    case ErrorKind::InfeasibleEndpoints: return "infeasible-endpoints";
    case ErrorKind::ControlBoundViolation: return "control-bound-violation";
    case ErrorKind::CapExceeded: return "cap-exceeded";
    case ErrorKind::InvalidScenario: return "invalid-scenario";
  }
  return "unknown";
}

}  // namespace tgplan
