#pragma once

// Explicit front-tracking curve shortening flow with the first node pinned
// (Dirichlet) and the last node sliding on the unit circle, which it meets
// orthogonally (Neumann).
//
// One step moves every free node by its discrete curvature vector, then
// redistributes the nodes uniformly in arclength. The Neumann end uses a
// ghost node reflected across the circle's tangent line, which makes the
// discrete tangent at the last node exactly radial; redistribution uses
// cubic interpolation with an odd reflection about the Dirichlet node and
// the same even reflection at the circle.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dncsf/barriers.hpp"
#include "dncsf/geometry.hpp"

namespace dncsf {

struct FlowState {
  Curve curve;
  double time = 0.0;
  CurveDiagnostics diagnostics;
  /// Steps taken to reach this state.
  long step = 0;

  static FlowState at(Curve c, double time, long step = 0);
};

enum class StopKind { Converged, Extinct, MaxTime };

struct StopRule {
  StopKind kind = StopKind::MaxTime;
  /// Converged: Hausdorff distance to the minimizing arc and max curvature
  /// below eps. Extinct: polyline length below eps.
  double eps = 1e-3;
  /// Extinct also fires once max curvature exceeds this.
  double kappa_cap = 1e3;

  static StopRule converged(double eps) { return {StopKind::Converged, eps, 1e3}; }
  static StopRule extinct(double eps_len, double kappa_cap = 1e3) { return {StopKind::Extinct, eps_len, kappa_cap}; }
  static StopRule max_time() { return {}; }
};

/// Default stop rule for offset d: convergence for d < 1, extinction at d = 1.
StopRule default_stop_rule(double d);

struct FlowRunConfig {
  FlowRunConfig(double d, Curve initial) : d(d), initial(std::move(initial)), stop(default_stop_rule(d)) {}

  double d;
  Curve initial;
  std::size_t nodes = 128;
  double dt_safety = 0.25;
  std::optional<double> t_end;
  StopRule stop;
  int record_every = 100;
  /// Hard cap on the number of steps; reaching it ends the run as
  /// MaxTimeReached.
  long max_steps = 400'000'000;
  /// Time label of the initial curve.
  double t_start = 0.0;
  /// Abort with InvariantViolation when kappa or kappa_s drop below
  /// -tol_inv on a recorded state (after the initial transient).
  bool check_sign_invariants = true;
  /// Invoked on the run's own thread after each recorded state.
  std::function<void(const FlowState&)> progress;

  void validate() const;
};

enum class EventKind { Start, StepRetried, ThetaBarHalfPi, Converged, Extinct, MaxTime, InvariantViolation };
std::string to_string(EventKind kind);

struct FlowEvent {
  double time = 0.0;
  EventKind kind = EventKind::Start;
  std::string detail;
};

enum class Outcome { ConvergedToMinimizer, Extinct, MaxTimeReached, InvariantViolation };
std::string to_string(Outcome outcome);

struct Trajectory {
  double d = 0.5;
  std::size_t nodes = 0;
  std::vector<FlowState> states;
  std::vector<FlowEvent> events;
  Outcome outcome = Outcome::MaxTimeReached;
  /// Estimated extinction time (Extinct only).
  double extinction_time = 0.0;
  std::string detail;
  long steps = 0;
  /// Number of steps between consecutive recorded states.
  int record_every = 1;

  std::vector<double> times() const;
};

/// Largest stable explicit step for the current node spacing is
/// 0.5 * h_min^2; step() rejects anything larger.
inline constexpr double kStabilityLimit = 0.5;

/// Scale-aware tolerance for sign invariants: 1e-3 (1 + kappa_max).
double tol_inv(const CurveDiagnostics& diag);

/// Smallest distance between consecutive nodes.
double min_spacing(const Curve& c);

/// One explicit step of size dt (dt <= 0.5 h_min^2) followed by arclength
/// redistribution. Throws StepRejected if the update folds the polyline or
/// leaves the disc.
FlowState step(const FlowState& state, double dt);

/// Iterates step() with dt = dt_safety * h_min^2 until the stop rule or
/// t_end fires. A rejected step is retried with half the step up to 20
/// times before the run ends in InvariantViolation.
Trajectory run(const FlowRunConfig& cfg);

/// Extinction time estimate from the area identity: the region above the
/// curve vanishes at rate (theta_max - theta_min).
double extinction_estimate(const FlowState& s);

// --- checks over recorded trajectories --------------------------------

/// Time at which theta_max first reaches pi/2 (linear interpolation between
/// recorded states), if it does.
std::optional<double> half_pi_time(const Trajectory& traj);

struct ThetaBarOdeReport {
  bool skipped = false;
  std::string reason;
  /// Shift applied so that theta_max = pi/2 at time zero.
  double alignment_shift = 0.0;
  /// min over interior recorded times of d(theta_max)/dt - sin/(a + cos).
  double worst_rate_margin = 0.0;
  double worst_rate_time = 0.0;
  /// min over aligned t <= 0 of theta_minus(t) - theta_max(t).
  double worst_comparison_margin = 0.0;
  double worst_comparison_time = 0.0;
};

inline constexpr double kTolOde = 5e-3;

/// Checks d(theta_max)/dt >= sin/(a + cos) and theta_max <= theta_minus for
/// aligned t <= 0. Throws ComparisonViolation when a margin is below -tol.
/// A trajectory that never turns (theta_max identically ~0) is skipped.
ThetaBarOdeReport theta_bar_ode_check(const Trajectory& traj, double tol = kTolOde);

struct SpeedBoundReport {
  /// min over states and nodes with cos(theta) > 0.1 of
  /// kappa / cos(theta) - lambda tan(lambda y).
  double worst_margin = 0.0;
  double worst_time = 0.0;
  Point worst_point;
  /// Per recorded state: time and max kappa / y.
  std::vector<double> times;
  std::vector<double> max_kappa_over_y;
};

/// kappa / cos(theta) >= lambda tan(lambda y) wherever cos(theta) > 0.1.
/// Throws ComparisonViolation below -tol.
SpeedBoundReport speed_bound_check(const Trajectory& traj, double lambda_ref, double tol = 1e-3);

/// Largest kappa / y along a curve; at the Dirichlet node the one-sided
/// quotient through the first interior node is used.
double max_kappa_over_y(const Curve& c);

struct InvariantReport {
  /// Each margin is (value - bound) + tol_inv, so >= 0 means the invariant
  /// holds within tolerance. Minimum over recorded states after the
  /// transient.
  double kappa_margin = 0.0;
  double kappa_s_margin = 0.0;
  double curvature_lower_bound_margin = 0.0;
  double gradient_lower_bound_margin = 0.0;  // d < 1 only
  /// min over consecutive states of theta_max(t+) - theta_max(t-).
  double theta_max_increment = 0.0;
  bool embedded = true;
  int states_checked = 0;
};

/// Discrete maximum-principle invariants over all recorded states whose
/// step index is past `transient_steps`.
InvariantReport check_invariants(const Trajectory& traj, long transient_steps = 10);

/// min kappa and min kappa_s (forward differences) along a curve.
std::pair<double, double> min_kappa_and_kappa_s(const Curve& c);

}  // namespace dncsf
