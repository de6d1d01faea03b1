#ifndef PWAHIER_SIMULATOR_HPP
#define PWAHIER_SIMULATOR_HPP

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pwahier/certificate.hpp"
#include "pwahier/linalg.hpp"
#include "pwahier/polytope.hpp"
#include "pwahier/relation.hpp"
#include "pwahier/systems.hpp"

namespace pwahier {

using VectorField = std::function<Vector(double, const Vector&)>;

/// Classical four-stage Runge-Kutta step. Throws NonFiniteState.
Vector step_rk4(const VectorField& f, const Vector& x, double t, double h);

/// Piecewise-constant, right-continuous reference ū₂(t).
class ReferenceSchedule {
 public:
  ReferenceSchedule() = default;
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<Vector>& values() const noexcept { return values_; }
  std::size_t dim() const { return values_.empty() ? 0 : values_.front().size(); }

  Vector operator()(double t) const;
  /// Largest ∞-norm over all waypoint values.
  double sup_norm() const;

 private:
  friend ReferenceSchedule reference_schedule(std::vector<std::pair<double, Vector>> waypoints);
  std::vector<double> times_;
  std::vector<Vector> values_;
};

/// Throws EmptySchedule, NonMonotoneTimes (times must increase strictly from 0)
/// or DimensionMismatch.
ReferenceSchedule reference_schedule(std::vector<std::pair<double, Vector>> waypoints);

struct Scenario {
  PwaSystem system;
  std::vector<AbstractionMode> abstraction;
  /// Concrete-space abstraction cells; empty for a linear abstraction.
  std::vector<Polyhedron> abstraction_cells;
  /// One joint system per concrete mode; joints[i].mode_j is the paired j.
  std::vector<JointSystem> joints;
  Certificate certificate;
  DisturbanceSignal disturbance;
  ReferenceSchedule reference;
  Vector x1_0;
  Vector x2_0;
  double t_end = 0.0;
  double h = 1e-3;
  /// A-priori bound on ‖x₂‖∞; the running maximum is used when absent.
  std::optional<double> x2_sup;
};

struct Sample {
  double t = 0.0;
  Vector x1;
  Vector x2;
  Vector xtilde;
  Vector u1;
  Vector u2bar;
  std::size_t mode_i = 0;
  std::size_t mode_j = 0;
  double err = 0.0;
  double v = 0.0;
  double b = 0.0;
  double delta = 0.0;
  /// Analytic V̇ at the sample; zero where V is degenerate.
  double v_dot = 0.0;
};

/// A localized cell crossing: the violated row changes sign between the
/// committed time t_lo and t_hi.
struct CrossingEvent {
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::size_t from_i = 0;
  std::size_t to_i = 0;
  std::size_t from_j = 0;
  std::size_t to_j = 0;
  std::size_t row = 0;
  double slack_lo = 0.0;
  double slack_hi = 0.0;
};

struct Trajectory {
  std::size_t state_dim = 0;
  std::size_t abstraction_dim = 0;
  std::size_t input_dim = 0;
  double kappa = 1.0;
  std::vector<Sample> samples;
  std::vector<CrossingEvent> crossings;
};

inline constexpr int kMaxBisections = 40;
inline constexpr double kCrossingWidth = 1e-10;
inline constexpr int kMaxCrossingsPerStep = 16;

/// Closed-loop hybrid simulation of the concrete system under the interface.
/// Throws EmptyTrajectory, NoCell, NonFiniteState, UncertifiedMode.
Trajectory run_scenario(const Scenario& s);

/// `t,x1_*,x2_*,u1_*,mode_i,mode_j,err,V,b,delta`, modes 1-based.
std::string trajectory_csv(const Trajectory& traj);
/// `t,err,kappaV,delta`.
std::string bounds_csv(const Trajectory& traj);
void export_trajectory(const Trajectory& traj, const std::filesystem::path& path);
void export_bounds(const Trajectory& traj, const std::filesystem::path& path);
/// Two-column gnuplot series err.dat, kappaV.dat, delta.dat, V.dat, b.dat.
/// Returns the written paths.
std::vector<std::filesystem::path> export_plot_data(const Trajectory& traj, const std::filesystem::path& dir);

/// Writes to a sibling temporary file and renames it over `path`. IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace pwahier

#endif  // PWAHIER_SIMULATOR_HPP
