// Command-line front end: `tgplan plan` and `tgplan verify`.

#include <iostream>

#include <CLI11.hpp>

#include "tgplan/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Time-optimal tangent-graph planner for a drag-limited point agent"};
  app.require_subcommand(1);

  tgplan::PlanOptions plan;
  auto* plan_cmd = app.add_subcommand("plan", "Plan a trajectory for a scenario file");
  plan_cmd->add_option("scenario", plan.scenario, "Scenario file")->required();
  plan_cmd->add_option("-o,--out", plan.out_dir, "Output directory")->required();
  plan_cmd->add_option("--dt", plan.dt, "Sampling interval in seconds")->capture_default_str();
  bool no_filter = false;
  plan_cmd->add_flag("--no-filter", no_filter, "Disable the ellipse filter");
  plan_cmd->add_flag("--svg", plan.svg, "Also write plan.svg");

  tgplan::VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Audit a trajectory file against its scenario");
  verify_cmd->add_option("trajectory", verify.trajectory, "Trajectory file")->required();
  verify_cmd->add_option("scenario", verify.scenario, "Scenario file")->required();
  verify_cmd->add_option("--kin-tol", verify.tolerances.kinematic,
                         "Absolute position/velocity consistency tolerance per interval, m")
      ->capture_default_str();
  verify_cmd->add_option("--control-tol", verify.tolerances.control_rel, "Relative control bound tolerance")
      ->capture_default_str();
  verify_cmd->add_option("--path-tol", verify.tolerances.path_deviation, "Path deviation tolerance, m")
      ->capture_default_str();
  verify_cmd->add_option("--terminal-tol", verify.tolerances.terminal, "Start/goal state tolerance")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tgplan::kExitInvalidScenario;
  }

  if (*plan_cmd) {
    plan.filter = !no_filter;
    return tgplan::planCommand(plan, std::cout, std::cerr);
  }
  return tgplan::verifyCommand(verify, std::cout, std::cerr);
}
