#pragma once

// Exact circular-arc barriers in the unit disc.
//
// The Dirichlet-Neumann family passes through o = (-d, 0) and meets the unit
// circle orthogonally at (cos t, sin t); advancing its angle by
//     dtheta/dt = sin(theta) / (a + cos(theta)),   theta(0) = pi/2
// gives a subsolution of curve shortening flow. The Neumann-Neumann family is
// symmetric about the y-axis and, driven by theta(t) = arcsin(exp(2t)), is a
// supersolution.

#include <cstddef>
#include <string>
#include <vector>

#include "dncsf/common.hpp"
#include "dncsf/geometry.hpp"

namespace dncsf {

/// The Dirichlet offset d in (0, 1] and the derived constants
/// a = (1/d + d)/2 and b = (1/d - d)/2, so that a^2 - b^2 = 1.
class ProblemConfig {
 public:
  explicit ProblemConfig(double d);

  double d() const { return d_; }
  double a() const { return a_; }
  double b() const { return b_; }
  Point o() const { return {-d_, 0.0}; }
  /// Existence time of the subsolution family: +inf for d < 1, log 2 at d = 1.
  double omega() const;

 private:
  double d_;
  double a_;
  double b_;
};

enum class ArcKind { DirichletNeumann, NeumannNeumann };

std::string to_string(ArcKind kind);

struct ArcBarrier {
  ArcKind kind;
  double theta;
  Point center;
  double radius;
  /// Endpoints in curve orientation: o (DN) or (-cos t, sin t) (NN) first,
  /// then the orthogonal contact point (cos t, sin t).
  Point start;
  Point end;
  /// Counterclockwise angle subtended from start to end, computed from the
  /// end tangents rather than from the (possibly huge) centre.
  double sweep;

  /// Angular parameters of start and end about the centre; the arc runs
  /// counterclockwise from the first to the second.
  double start_angle() const;
  double end_angle() const;
  Point at(double phi) const;
  /// Point reached after turning by delta in [0, sweep] from start, written
  /// as start plus a chord so that nearly flat arcs keep full accuracy.
  Point at_offset(double delta) const;
  /// N + 1 points uniform in the arc's own angle parameter.
  Curve sample(std::size_t n) const;
};

ArcBarrier dn_arc(const ProblemConfig& cfg, double theta);
ArcBarrier nn_arc(double theta);

/// Angle driving the supersolution family: arcsin(exp(2t)) for t <= 0.
double theta_plus(double t);

/// Angle driving the subsolution family, by inversion of
///     exp(t) = 2 sin^(1+a)(theta/2) cos^(1-a)(theta/2)
/// with monotone bisection. Requires t < omega().
double theta_minus(const ProblemConfig& cfg, double t);

/// Closed-form inverse of theta_minus: log(2 sin^(1+a)(theta/2) cos^(1-a)(theta/2))
/// for theta in (0, pi).
double theta_minus_time(const ProblemConfig& cfg, double theta);

/// n times whose subsolution angles theta_minus(t) are evenly spaced on
/// [theta_minus(t_lo), theta_hi]. For d < 1 the angle reaches pi to double
/// precision at moderate t, so grids uniform in t degenerate; this grid
/// keeps every member a proper arc.
std::vector<double> dn_time_grid(const ProblemConfig& cfg, int n, double t_lo = -10.0, double theta_hi = kPi - 0.05);

/// Right-hand side of the characteristic ODE.
double characteristic_rate(const ProblemConfig& cfg, double theta);

/// Classical fourth-order Runge-Kutta integration of the characteristic ODE
/// from theta(t0) = theta0 to t1 with at most `max_step` per step.
double integrate_characteristic(const ProblemConfig& cfg, double theta0, double t0, double t1,
                                double max_step = 1e-3);

struct BarrierReport {
  ArcKind kind;
  double d = 0.0;
  double t = 0.0;
  int samples = 0;
  double theta = 0.0;
  double min_slack = 0.0;
  Point argmin_point;
  /// Per-sample points and slacks in arc order.
  std::vector<Point> points;
  std::vector<double> slacks;
};

class BarrierViolation : public Error {
 public:
  BarrierViolation(const std::string& what, BarrierReport report)
      : Error(what), report_(std::move(report)) {}
  const BarrierReport& report() const { return report_; }

 private:
  BarrierReport report_;
};

inline constexpr double kBarrierSlackTol = 1e-10;

/// Samples the arc at time t and checks the sub/supersolution inequality
/// between normal speed and curvature. For the DN family the slack is
/// kappa - speed, for the NN family speed - kappa. Throws BarrierViolation
/// if any slack is below -1e-10.
BarrierReport verify_barrier_inequality(const ProblemConfig& cfg, ArcKind kind, double t, int samples);

/// Normal speed -gamma_t . nu of the DN family at a point of C_theta.
double dn_normal_speed(const ProblemConfig& cfg, double theta, Point p);
/// Normal speed of the NN family driven by theta_plus at a point of its arc.
double nn_normal_speed(double theta, Point p);

}  // namespace dncsf
