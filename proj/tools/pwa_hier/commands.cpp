#include "commands.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "pwahier/model_file.hpp"
#include "pwahier/pipeline.hpp"
#include "pwahier/simulator.hpp"

namespace pwahier::cli {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NonFinite:
    case ErrorCode::InvalidArgument:
    case ErrorCode::NotHurwitz:
    case ErrorCode::NoFeasiblePairing:
    case ErrorCode::SingularBBt:
    case ErrorCode::UncertifiedRelation:
    case ErrorCode::SynthesisFailed:
    case ErrorCode::InfeasibleCertificate:
    case ErrorCode::EmptySchedule:
    case ErrorCode::NonMonotoneTimes:
    case ErrorCode::EmptyTrajectory:
    case ErrorCode::UnknownParameter:
    case ErrorCode::Empty:
    case ErrorCode::Unbounded:
      return kExitValidation;
    default:
      return kExitRuntime;
  }
}

namespace {

void fill_relations(RunReport& report, const RelationStage& rel) {
  report.modes.clear();
  for (std::size_t i = 0; i < rel.maps.size(); ++i) {
    ModeReport m;
    m.mode_i = i;
    m.mode_j = rel.pairing[i];
    m.residual = rel.maps[i].residual;
    m.tolerance = rel.maps[i].tolerance;
    m.certified = rel.maps[i].certified;
    report.modes.push_back(m);
  }
}

void fill_certificate(RunReport& report, const PreparedModel& prep) {
  report.kappa = prep.certificate.kappa;
  report.lambda = prep.certificate.lambda;
  report.synthesized = prep.synthesized;
  for (std::size_t i = 0; i < prep.joints.size(); ++i) {
    auto& m = report.modes[i];
    m.lmi = prep.lmi[i];
    if (prep.lmi[i].feasible) {
      m.gains = compute_gains(prep.certificate.modes[i], prep.certificate.lambda, prep.joints[i], 0.0, 0.0, 0.0);
    }
  }
}

void fail(RunReport& report, const Error& e) {
  report.exit_code = exit_code_for(e.code());
  report.error = e.what();
  spdlog::error("{}", e.what());
}

/// Loads, solves and certifies. Returns nullopt after recording a failure.
std::optional<PreparedModel> prepare(const ModelFile& model, RunReport& report) {
  report.model_name = model.name;
  RelationStage rel = solve_model_relations(model);
  fill_relations(report, rel);
  for (const auto& m : report.modes) {
    spdlog::info("mode {} -> abstraction mode {}: residual {:.3e} (tolerance {:.3e})", m.mode_i + 1, m.mode_j + 1,
                 m.residual, m.tolerance);
  }
  if (!rel.certified()) {
    report.exit_code = kExitValidation;
    report.error = "UncertifiedRelation: relation residual exceeds tolerance";
    spdlog::error("{}", report.error);
    return std::nullopt;
  }
  PreparedModel prep = prepare_model(model);
  fill_certificate(report, prep);
  if (!prep.certified()) {
    report.exit_code = kExitValidation;
    report.error = "InfeasibleCertificate: certificate fails its LMI conditions";
    spdlog::error("{}", report.error);
    return std::nullopt;
  }
  return prep;
}

void apply_options(ModelFile& model, const RunOptions& options) {
  if (options.t_end) model.scenario.t_end = *options.t_end;
  if (options.step) {
    if (!(*options.step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
    model.scenario.h = *options.step;
  }
  if (options.disturbance_amplitude) {
    if (*options.disturbance_amplitude < 0.0) {
      throw Error(ErrorCode::InvalidArgument, "disturbance amplitude must be nonnegative");
    }
    model.disturbance = model.disturbance.with_sup_norm(*options.disturbance_amplitude);
  }
  if (options.kappa) {
    if (!(*options.kappa > 0.0)) throw Error(ErrorCode::InvalidArgument, "kappa must be positive");
    model.certificate.kappa = *options.kappa;
  }
}

/// Keeps ‖x̃₀‖ and draws a new direction for it.
void randomize_offset(Scenario& sc, std::uint64_t seed) {
  const auto& sys = sc.system;
  const std::size_t i = locate_mode(sys.partition(), sc.x1_0);
  const Matrix& p = sc.joints[i].p;
  const Vector base = p * sc.x2_0;
  const double radius = (sc.x1_0 - base).norm();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector dir(sc.x1_0.size());
  double nrm = 0.0;
  while (nrm < 1e-12) {
    for (std::size_t k = 0; k < dir.size(); ++k) dir[k] = normal(rng);
    nrm = dir.norm();
  }
  sc.x1_0 = base + (radius / nrm) * dir;
}

void summarize(RunReport& report, const Trajectory& traj) {
  report.simulated = true;
  report.samples = traj.samples.size();
  report.crossings = traj.crossings.size();
  report.max_err = report.max_v = report.max_delta = 0.0;
  report.violations = 0;
  for (const auto& s : traj.samples) {
    report.max_err = std::max(report.max_err, s.err);
    report.max_v = std::max(report.max_v, s.v);
    report.max_delta = std::max(report.max_delta, s.delta);
    const double kv = traj.kappa * s.v;
    if (!(s.err <= kv + kBoundChainSlack) || !(kv <= s.delta + kBoundChainSlack)) ++report.violations;
  }
  if (!traj.samples.empty()) report.terminal_x1 = traj.samples.back().x1;
  report.pass = report.violations == 0 && !traj.samples.empty();
  report.exit_code = report.pass ? kExitOk : kExitRuntime;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

RunReport cmd_check(const std::filesystem::path& model_path) {
  RunReport report;
  try {
    const ModelFile model = load_model(model_path);
    if (prepare(model, report)) report.exit_code = kExitOk;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) {
      report.exit_code = kExitValidation;
      report.error = e.what();
    } else {
      fail(report, e);
    }
  }
  return report;
}

RunReport cmd_run(const std::filesystem::path& model_path, const RunOptions& options) {
  RunReport report;
  ModelFile model;
  try {
    model = load_model(model_path);
  } catch (const Error& e) {
    fail(report, e);
    report.exit_code = kExitValidation;
    return report;
  }
  try {
    apply_options(model, options);
    auto prep = prepare(model, report);
    if (!prep) return report;
    Scenario sc = make_scenario(*prep, model);
    if (options.seed) randomize_offset(sc, *options.seed);
    const Trajectory traj = run_scenario(sc);
    summarize(report, traj);
    spdlog::info("{} samples, {} crossings, max err {:.4g}, max delta {:.4g}", report.samples, report.crossings,
                 report.max_err, report.max_delta);
    if (!options.out_dir.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(options.out_dir, ec);
      if (ec) throw Error(ErrorCode::IoError, "cannot create " + options.out_dir.string());
      report.files.push_back(options.out_dir / "trajectory.csv");
      export_trajectory(traj, report.files.back());
      report.files.push_back(options.out_dir / "bounds.csv");
      export_bounds(traj, report.files.back());
      ModelFile certified = model;
      set_certificate(certified, prep->certificate);
      report.files.push_back(options.out_dir / "certified.model");
      write_file_atomic(report.files.back(), dump_model(certified));
      if (options.plot_data) {
        for (auto& p : export_plot_data(traj, options.out_dir)) report.files.push_back(std::move(p));
      }
    }
  } catch (const Error& e) {
    fail(report, e);
  }
  return report;
}

SweepTable cmd_sweep(const std::filesystem::path& model_path, const std::string& parameter,
                     const std::vector<double>& values) {
  SweepTable table;
  table.parameter = parameter;
  if (parameter != "disturbance-amplitude" && parameter != "kappa" && parameter != "step") {
    table.exit_code = kExitValidation;
    table.error = "UnknownParameter: '" + parameter + "' (expected disturbance-amplitude, kappa or step)";
    return table;
  }
  if (values.empty()) {
    table.exit_code = kExitValidation;
    table.error = "InvalidArgument: no sweep values";
    return table;
  }
  for (double v : values) {
    RunOptions opts;
    if (parameter == "disturbance-amplitude") opts.disturbance_amplitude = v;
    if (parameter == "kappa") opts.kappa = v;
    if (parameter == "step") opts.step = v;
    SweepRow row{v, cmd_run(model_path, opts)};
    table.exit_code = std::max(table.exit_code, row.report.exit_code);
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string format_report(const RunReport& r) {
  std::ostringstream os;
  if (!r.model_name.empty()) os << "model " << r.model_name << "\n";
  for (const auto& m : r.modes) {
    os << "mode " << m.mode_i + 1 << " -> " << m.mode_j + 1 << "  residual " << num(m.residual) << " (tol "
       << num(m.tolerance) << ") " << (m.certified ? "certified" : "UNCERTIFIED") << "\n";
    if (m.lmi) {
      os << "  lmi output " << num(m.lmi->output_margin) << "  positivity " << num(m.lmi->positivity_margin)
         << "  decrease " << num(m.lmi->decrease_margin) << " (state " << num(m.lmi->decrease_margin_state) << ")  "
         << (m.lmi->feasible ? "feasible" : "INFEASIBLE") << "\n";
    }
    if (m.gains) {
      os << "  gains g1 " << num(m.gains->gamma1) << "  g2 " << num(m.gains->gamma2) << "  g3 "
         << num(m.gains->gamma3) << "  sqrt(m) " << num(m.gains->sqrt_m) << "\n";
    }
  }
  if (r.kappa > 0.0) {
    os << "kappa " << num(r.kappa) << "  lambda " << num(r.lambda) << (r.synthesized ? "  (synthesized)" : "")
       << "\n";
  }
  if (r.simulated) {
    os << "samples " << r.samples << "  crossings " << r.crossings << "\n";
    os << "max err " << num(r.max_err) << "  max V " << num(r.max_v) << "  max delta " << num(r.max_delta) << "\n";
    os << "bound chain " << (r.pass ? "PASS" : "FAIL") << " (" << r.violations << " violations)\n";
  }
  for (const auto& f : r.files) os << "wrote " << f.string() << "\n";
  if (!r.error.empty()) os << "error: " << r.error << "\n";
  return os.str();
}

std::string format_sweep(const SweepTable& t) {
  std::ostringstream os;
  if (!t.error.empty()) {
    os << "error: " << t.error << "\n";
    return os.str();
  }
  os << t.parameter << ",max_err,max_V,max_delta,verdict\n";
  for (const auto& row : t.rows) {
    const auto& r = row.report;
    os << num(row.value) << ",";
    if (r.simulated) {
      os << num(r.max_err) << "," << num(r.max_v) << "," << num(r.max_delta) << "," << (r.pass ? "PASS" : "FAIL");
    } else {
      os << ",,,ERROR " << r.error;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace pwahier::cli
