#include "pwahier/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>

#include "pwahier/error.hpp"

namespace pwahier {

Vector step_rk4(const VectorField& f, const Vector& x, double t, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "RK4 step must be positive");
  const Vector k1 = f(t, x);
  const Vector k2 = f(t + 0.5 * h, x + (0.5 * h) * k1);
  const Vector k3 = f(t + 0.5 * h, x + (0.5 * h) * k2);
  const Vector k4 = f(t + h, x + h * k3);
  Vector out = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!out.all_finite()) throw Error(ErrorCode::NonFiniteState, "state became non-finite at t = " + std::to_string(t));
  return out;
}

ReferenceSchedule reference_schedule(std::vector<std::pair<double, Vector>> waypoints) {
  if (waypoints.empty()) throw Error(ErrorCode::EmptySchedule, "reference schedule has no waypoints");
  if (waypoints.front().first != 0.0) throw Error(ErrorCode::NonMonotoneTimes, "reference schedule must start at t = 0");
  const std::size_t dim = waypoints.front().second.size();
  ReferenceSchedule out;
  for (std::size_t k = 0; k < waypoints.size(); ++k) {
    auto& [t, v] = waypoints[k];
    if (!std::isfinite(t) || (k > 0 && !(t > out.times_.back()))) {
      throw Error(ErrorCode::NonMonotoneTimes, "reference times must increase strictly");
    }
    if (v.size() != dim) {
      throw Error(ErrorCode::DimensionMismatch, "reference values differ in dimension");
    }
    if (!v.all_finite()) throw Error(ErrorCode::NonFinite, "reference values must be finite");
    out.times_.push_back(t);
    out.values_.push_back(std::move(v));
  }
  return out;
}

Vector ReferenceSchedule::operator()(double t) const {
  if (values_.empty()) throw Error(ErrorCode::EmptySchedule, "reference schedule has no waypoints");
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return values_.front();
  return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

double ReferenceSchedule::sup_norm() const {
  double out = 0.0;
  for (const auto& v : values_) out = std::max(out, v.norm_inf());
  return out;
}

namespace {

class Runner {
 public:
  explicit Runner(const Scenario& s) : s_(s), gains_(s.joints.size()) {
    const auto& sys = s.system;
    if (!(s.h > 0.0) || !std::isfinite(s.h)) throw Error(ErrorCode::InvalidArgument, "step h must be positive");
    if (!(s.t_end > 0.0)) throw Error(ErrorCode::EmptyTrajectory, "t_end must be positive");
    if (s.joints.size() != sys.num_modes() || s.certificate.modes.size() != sys.num_modes()) {
      throw Error(ErrorCode::DimensionMismatch, "one joint system and certificate per concrete mode is required");
    }
    if (s.abstraction.empty()) throw Error(ErrorCode::InvalidArgument, "scenario has no abstraction");
    if (!s.abstraction_cells.empty() && s.abstraction_cells.size() != s.abstraction.size()) {
      throw Error(ErrorCode::DimensionMismatch, "one concrete-space cell per abstraction mode is required");
    }
    if (s.x1_0.size() != sys.state_dim() || s.x2_0.size() != s.abstraction.front().state_dim()) {
      throw Error(ErrorCode::DimensionMismatch, "initial state dimensions");
    }
    if (s.reference.dim() != s.abstraction.front().input_dim()) {
      throw Error(ErrorCode::DimensionMismatch, "reference dimension must equal abstraction input dimension");
    }
    if (s.disturbance.dim() != sys.state_dim()) throw Error(ErrorCode::DimensionMismatch, "disturbance dimension");
    if (!s.abstraction_cells.empty()) abstraction_partition_ = Partition(s.abstraction_cells);
    u_sup_ = s.reference.sup_norm();
    c_sup_ = disturbance_sup_norm(s.disturbance);
  }

  Trajectory run() {
    const auto& sys = s_.system;
    Trajectory traj;
    traj.state_dim = sys.state_dim();
    traj.abstraction_dim = s_.x2_0.size();
    traj.input_dim = sys.input_dim();
    traj.kappa = s_.certificate.kappa;

    const auto steps = static_cast<std::size_t>(std::floor(s_.t_end / s_.h * (1.0 + 1e-12)));
    traj.samples.reserve(steps + 1);
    x1_ = s_.x1_0;
    x2_ = s_.x2_0;
    i_ = locate_mode(sys.partition(), x1_);
    j_ = locate_abstraction(x1_, i_, std::nullopt);

    for (std::size_t k = 0;; ++k) {
      const double t = static_cast<double>(k) * s_.h;
      i_ = locate_mode(sys.partition(), x1_, i_);
      j_ = locate_abstraction(x1_, i_, j_);
      traj.samples.push_back(record(t));
      if (k == steps) break;
      advance(t, static_cast<double>(k + 1) * s_.h, traj);
    }
    return traj;
  }

 private:
  std::size_t locate_abstraction(const Vector& x1, std::size_t i, std::optional<std::size_t> previous) const {
    const std::size_t paired = s_.joints[i].mode_j;
    if (s_.abstraction_cells.empty()) return paired;
    std::vector<std::size_t> order{paired};
    if (previous) order.push_back(*previous);
    for (std::size_t j = 0; j < s_.abstraction_cells.size(); ++j) order.push_back(j);
    const auto j = first_containing(abstraction_partition_, x1, order);
    if (!j) throw Error(ErrorCode::NoCell, "state lies outside every abstraction cell");
    if (*j != paired) {
      throw Error(ErrorCode::UncertifiedMode, "pair (" + std::to_string(i + 1) + ", " + std::to_string(*j + 1) +
                                                  ") has no relation or certificate");
    }
    return *j;
  }

  Vector field(std::size_t i, std::size_t j, const Vector& u2bar, double t, const Vector& state) const {
    const std::size_t n = x1_.size();
    const Vector x1 = state.segment(0, n);
    const Vector x2 = state.segment(n, state.size() - n);
    const auto& mode = s_.system.mode(i);
    const auto& abs = s_.abstraction[j];
    const auto& js = s_.joints[i];
    const Vector u1 = js.iface.evaluate(x1 - js.p * x2, x2, u2bar);
    const Vector dx1 = mode.a * x1 + mode.b * u1 + disturbance_value(s_.disturbance, t);
    const Vector dx2 = abs.f * x2 + abs.g * (abs.l * x2 + u2bar);
    return dx1.append(dx2);
  }

  /// Smallest slack over the rows of the current concrete and abstraction cells.
  std::pair<double, std::size_t> worst_slack(std::size_t i, std::size_t j, const Vector& x1) const {
    const Vector si = s_.system.partition().cell(i).slack(x1);
    double worst = std::numeric_limits<double>::infinity();
    std::size_t row = 0;
    for (std::size_t r = 0; r < si.size(); ++r) {
      if (si[r] < worst) worst = si[r], row = r;
    }
    if (!s_.abstraction_cells.empty()) {
      const Vector sj = s_.abstraction_cells[j].slack(x1);
      for (std::size_t r = 0; r < sj.size(); ++r) {
        if (sj[r] < worst) worst = sj[r], row = si.size() + r;
      }
    }
    return {worst, row};
  }

  double row_slack(std::size_t i, std::size_t j, const Vector& x1, std::size_t row) const {
    const auto& ci = s_.system.partition().cell(i);
    if (row < ci.num_constraints()) return ci.slack(x1)[row];
    return s_.abstraction_cells[j].slack(x1)[row - ci.num_constraints()];
  }

  bool inside(std::size_t i, std::size_t j, const Vector& x1) const {
    return worst_slack(i, j, x1).first >= -kMembershipSlack;
  }

  void advance(double t0, double t1, Trajectory& traj) {
    const std::size_t n = x1_.size();
    Vector state = x1_.append(x2_);
    double cur = t0;
    int crossings = 0;
    while (cur < t1) {
      const double dt = t1 - cur;
      const Vector u2bar = s_.reference(cur);
      const std::size_t i = i_;
      const std::size_t j = j_;
      const VectorField f = [&](double t, const Vector& x) { return field(i, j, u2bar, t, x); };
      Vector next = step_rk4(f, state, cur, dt);
      if (crossings >= kMaxCrossingsPerStep || inside(i, j, next.segment(0, n))) {
        state = std::move(next);
        break;
      }
      double lo = 0.0;
      double hi = dt;
      Vector lo_state = state;
      Vector hi_state = next;
      for (int it = 0; it < kMaxBisections && hi - lo > kCrossingWidth; ++it) {
        const double mid = 0.5 * (lo + hi);
        Vector mid_state = step_rk4(f, state, cur, mid);
        if (inside(i, j, mid_state.segment(0, n))) {
          lo = mid;
          lo_state = std::move(mid_state);
        } else {
          hi = mid;
          hi_state = std::move(mid_state);
        }
      }
      const Vector x1_hi = hi_state.segment(0, n);
      const std::size_t row = worst_slack(i, j, x1_hi).second;
      CrossingEvent ev;
      ev.t_lo = cur + lo;
      ev.t_hi = cur + hi;
      ev.from_i = i;
      ev.from_j = j;
      ev.row = row;
      ev.slack_lo = row_slack(i, j, lo_state.segment(0, n), row);
      ev.slack_hi = row_slack(i, j, x1_hi, row);
      i_ = locate_mode(s_.system.partition(), x1_hi, i);
      j_ = locate_abstraction(x1_hi, i_, j);
      ev.to_i = i_;
      ev.to_j = j_;
      traj.crossings.push_back(ev);
      state = std::move(lo_state);
      cur += lo;
      ++crossings;
    }
    x1_ = state.segment(0, n);
    x2_ = state.segment(n, state.size() - n);
  }

  const Gains& gains(std::size_t i) {
    if (!gains_[i]) {
      try {
        gains_[i] = compute_gains(s_.certificate.modes[i], s_.certificate.lambda, s_.joints[i], 0.0, 0.0, 0.0);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InfeasibleCertificate) throw;
        throw Error(ErrorCode::UncertifiedMode, e.what());
      }
    }
    return *gains_[i];
  }

  Sample record(double t) {
    const auto& js = s_.joints[i_];
    const auto& cert = s_.certificate.modes[i_];
    const double kappa = s_.certificate.kappa;
    Sample smp;
    smp.t = t;
    smp.x1 = x1_;
    smp.x2 = x2_;
    smp.xtilde = x1_ - js.p * x2_;
    smp.u2bar = s_.reference(t);
    smp.u1 = js.iface.evaluate(smp.xtilde, x2_, smp.u2bar);
    smp.mode_i = i_;
    smp.mode_j = j_;
    smp.err = (s_.system.mode(i_).c * x1_ - s_.abstraction[j_].h * x2_).norm();
    const Vector omega = smp.xtilde.append(x2_);
    smp.v = sim_fn_value(cert, kappa, omega);
    x2_running_ = std::max(x2_running_, x2_.norm_inf());
    const double c_sup = std::max(c_sup_, s_.system.mode(i_).c_bound);
    const Gains g = gains(i_).with_sups(u_sup_, c_sup, s_.x2_sup.value_or(x2_running_));
    smp.b = g.bound();
    smp.delta = error_bound(kappa, g, smp.v);
    try {
      smp.v_dot = sim_fn_derivative(cert, kappa, js, omega, smp.u2bar, disturbance_value(s_.disturbance, t));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateState) throw;
      smp.v_dot = 0.0;
    }
    return smp;
  }

  const Scenario& s_;
  std::vector<std::optional<Gains>> gains_;
  Partition abstraction_partition_;
  double u_sup_ = 0.0;
  double c_sup_ = 0.0;
  double x2_running_ = 0.0;
  Vector x1_;
  Vector x2_;
  std::size_t i_ = 0;
  std::size_t j_ = 0;
};

void append_number(std::string& out, double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  out.append(buf, static_cast<std::size_t>(len));
}

void append_indexed_header(std::string& out, const char* prefix, std::size_t count) {
  for (std::size_t k = 1; k <= count; ++k) {
    out += prefix;
    out += std::to_string(k);
    out += ',';
  }
}

void append_values(std::string& out, const Vector& v) {
  for (double x : v.values()) {
    append_number(out, x);
    out += ',';
  }
}

}  // namespace

Trajectory run_scenario(const Scenario& s) { return Runner(s).run(); }

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t,";
  append_indexed_header(out, "x1_", traj.state_dim);
  append_indexed_header(out, "x2_", traj.abstraction_dim);
  append_indexed_header(out, "u1_", traj.input_dim);
  out += "mode_i,mode_j,err,V,b,delta\n";
  out.reserve(traj.samples.size() * 24 * (traj.state_dim + traj.abstraction_dim + traj.input_dim + 7));
  for (const auto& smp : traj.samples) {
    append_number(out, smp.t);
    out += ',';
    append_values(out, smp.x1);
    append_values(out, smp.x2);
    append_values(out, smp.u1);
    out += std::to_string(smp.mode_i + 1);
    out += ',';
    out += std::to_string(smp.mode_j + 1);
    for (double v : {smp.err, smp.v, smp.b, smp.delta}) {
      out += ',';
      append_number(out, v);
    }
    out += '\n';
  }
  return out;
}

std::string bounds_csv(const Trajectory& traj) {
  std::string out = "t,err,kappaV,delta\n";
  for (const auto& smp : traj.samples) {
    append_number(out, smp.t);
    for (double v : {smp.err, traj.kappa * smp.v, smp.delta}) {
      out += ',';
      append_number(out, v);
    }
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorCode::IoError, "cannot open " + tmp.string() + " for writing");
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw Error(ErrorCode::IoError, "failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot move " + tmp.string() + " to " + path.string());
  }
}

void export_trajectory(const Trajectory& traj, const std::filesystem::path& path) {
  write_file_atomic(path, trajectory_csv(traj));
}

void export_bounds(const Trajectory& traj, const std::filesystem::path& path) {
  write_file_atomic(path, bounds_csv(traj));
}

std::vector<std::filesystem::path> export_plot_data(const Trajectory& traj, const std::filesystem::path& dir) {
  const std::pair<const char*, double (*)(const Trajectory&, const Sample&)> series[] = {
      {"err.dat", [](const Trajectory&, const Sample& s) { return s.err; }},
      {"kappaV.dat", [](const Trajectory& t, const Sample& s) { return t.kappa * s.v; }},
      {"delta.dat", [](const Trajectory&, const Sample& s) { return s.delta; }},
      {"V.dat", [](const Trajectory&, const Sample& s) { return s.v; }},
      {"b.dat", [](const Trajectory&, const Sample& s) { return s.b; }},
  };
  std::vector<std::filesystem::path> written;
  for (const auto& [name, get] : series) {
    std::string out;
    for (const auto& smp : traj.samples) {
      append_number(out, smp.t);
      out += ' ';
      append_number(out, get(traj, smp));
      out += '\n';
    }
    written.push_back(dir / name);
    write_file_atomic(written.back(), out);
  }
  return written;
}

}  // namespace pwahier
