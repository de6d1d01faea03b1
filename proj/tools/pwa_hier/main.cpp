#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>
#include <string>

#include "commands.hpp"

namespace {

void configure_logging() {
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("PWA_HIER_LOG");
  const std::string level = env ? env : "error";
  if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else if (level == "info") {
    spdlog::set_level(spdlog::level::info);
  } else {
    spdlog::set_level(spdlog::level::err);
  }
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  using namespace pwahier::cli;

  CLI::App app{"Hierarchical control of PWA systems via approximate simulation"};
  app.require_subcommand(1);

  std::string model;
  auto* check = app.add_subcommand("check", "Solve relations and certify without simulating");
  check->add_option("model", model, "Model file")->required();

  RunOptions run_opts;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Simulate the scenario and check the bound chain");
  run->add_option("model", model, "Model file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_flag("--plot-data", run_opts.plot_data, "Also write two-column gnuplot series");
  run->add_option("--t-end", run_opts.t_end, "Override the scenario end time");
  run->add_option("--step", run_opts.step, "Override the integration step");
  run->add_option("--seed", run_opts.seed, "Randomize the direction of the initial tracking offset");

  std::string param;
  std::vector<double> values;
  auto* sweep = app.add_subcommand("sweep", "Rerun the scenario over parameter values");
  sweep->add_option("model", model, "Model file")->required();
  sweep->add_option("--param", param, "disturbance-amplitude, kappa or step")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (*check) {
    const RunReport report = cmd_check(model);
    std::cout << format_report(report);
    return report.exit_code;
  }
  if (*run) {
    run_opts.out_dir = out_dir;
    const RunReport report = cmd_run(model, run_opts);
    std::cout << format_report(report);
    return report.exit_code;
  }
  const SweepTable table = cmd_sweep(model, param, values);
  std::cout << format_sweep(table);
  return table.exit_code;
}
