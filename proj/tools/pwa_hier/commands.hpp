#ifndef PWAHIER_TOOLS_COMMANDS_HPP
#define PWAHIER_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pwahier/certificate.hpp"
#include "pwahier/error.hpp"
#include "pwahier/linalg.hpp"

namespace pwahier::cli {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitRuntime = 2 };

/// Validation failures exit 1; everything else exits 2.
int exit_code_for(ErrorCode code);

inline constexpr double kBoundChainSlack = 1e-6;

struct ModeReport {
  std::size_t mode_i = 0;
  std::size_t mode_j = 0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool certified = false;
  std::optional<LmiReport> lmi;
  std::optional<Gains> gains;
};

struct RunReport {
  std::string model_name;
  std::vector<ModeReport> modes;
  double kappa = 0.0;
  double lambda = 0.0;
  bool synthesized = false;
  bool simulated = false;
  std::size_t samples = 0;
  std::size_t crossings = 0;
  double max_err = 0.0;
  double max_v = 0.0;
  double max_delta = 0.0;
  std::size_t violations = 0;
  bool pass = false;
  Vector terminal_x1;
  std::vector<std::filesystem::path> files;
  int exit_code = kExitOk;
  std::string error;
};

struct RunOptions {
  std::filesystem::path out_dir;
  bool plot_data = false;
  std::optional<double> t_end;
  std::optional<double> step;
  std::optional<std::uint64_t> seed;
  std::optional<double> disturbance_amplitude;
  std::optional<double> kappa;
};

/// Relations, pairing and certificates without simulation.
RunReport cmd_check(const std::filesystem::path& model_path);

/// Runs the scenario; writes trajectory.csv, bounds.csv, certified.model and,
/// with plot_data, two-column .dat series into out_dir. An empty out_dir
/// skips file output.
RunReport cmd_run(const std::filesystem::path& model_path, const RunOptions& options);

struct SweepRow {
  double value = 0.0;
  RunReport report;
};

struct SweepTable {
  std::string parameter;
  std::vector<SweepRow> rows;
  int exit_code = kExitOk;
  std::string error;
};

/// Parameters: disturbance-amplitude, kappa, step. UnknownParameter otherwise.
SweepTable cmd_sweep(const std::filesystem::path& model_path, const std::string& parameter,
                     const std::vector<double>& values);

std::string format_report(const RunReport& report);
std::string format_sweep(const SweepTable& table);

}  // namespace pwahier::cli

#endif  // PWAHIER_TOOLS_COMMANDS_HPP
