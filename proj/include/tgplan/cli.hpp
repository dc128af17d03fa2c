#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tgplan/error.hpp"
#include "tgplan/path.hpp"
#include "tgplan/roadmap.hpp"
#include "tgplan/scenario.hpp"
#include "tgplan/sim_oracle.hpp"
#include "tgplan/velocity.hpp"

namespace tgplan {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitAuditFailure = 1,
  kExitNoPath = 2,
  kExitInvalidScenario = 3,
  kExitInternal = 4,
};

int exitCodeFor(ErrorKind kind);

/// Geometric stage of the pipeline.
struct PathPlan {
  std::vector<InflatedObstacle> obstacles;
  Roadmap full;  // terminals attached, unfiltered
  Roadmap used;  // what Dijkstra ran on
  double km = 1.0;
  PlannedPath path;
};

PathPlan planPath(const Scenario& scenario, bool filter);

/// Full pipeline result.
struct PlanResult {
  PathPlan geometry;
  SpeedProfile profile;
  std::vector<TrajectorySample> samples;
  AuditReport audit;
};

PlanResult planScenario(const Scenario& scenario, double dt, bool filter);

TrajectoryFile makeTrajectoryFile(const Scenario& scenario, const PlanResult& plan, double dt, bool filter);
std::string renderReport(const Scenario& scenario, const PlanResult& plan);
std::string renderSvg(const Scenario& scenario, const PlanResult& plan);

struct PlanOptions {
  std::string scenario;
  std::string out_dir;
  double dt = 1e-3;
  bool filter = true;
  bool svg = false;
};

struct VerifyOptions {
  std::string trajectory;
  std::string scenario;
  AuditTolerances tolerances;
};

/// `plan`: writes trajectory.txt and report.txt (and plan.svg) into out_dir.
int planCommand(const PlanOptions& opts, std::ostream& out, std::ostream& err);
/// `verify`: audits a trajectory file against its scenario.
int verifyCommand(const VerifyOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace tgplan
