#pragma once

// Post-processing of recorded trajectories: the backward-in-time exponential
// asymptotics y ~ A e^{lambda0^2 t} sinh(lambda0 (x + d)), type-II blow-up
// extraction with comparison against the Grim Reaper y = -log cos x, and the
// first-variation identity d(area)/dt = -(theta_max - theta_min).

#include <cstddef>
#include <utility>
#include <vector>

#include "dncsf/flow.hpp"
#include "dncsf/geometry.hpp"

namespace dncsf {

/// States used by fit_asymptotics have theta_max below this.
inline constexpr double kFitThetaMax = 0.2;
/// Minimum number of usable states for a fit.
inline constexpr std::size_t kFitMinStates = 10;

struct AsymptoticFit {
  /// Least-squares amplitude of e^{-lambda0^2 t} y(x, t) against
  /// sinh(lambda0 (x + d)) over all window states.
  double A = 0.0;
  /// Least-squares slope of log(max height) against t.
  double rate = 0.0;
  /// Largest relative L2 misfit over window states between the normalized
  /// profile and its best multiple of sinh(lambda0 (x + d)).
  double profile_error = 0.0;
  /// Times of the first and last window state.
  std::pair<double, double> window{0.0, 0.0};
  std::size_t states_used = 0;
};

/// Fits the early-time regime: the longest run of leading recorded states
/// with theta_max < 0.2. Throws InsufficientWindow with fewer than 10.
AsymptoticFit fit_asymptotics(const Trajectory& traj, double lambda0, double d);

struct BlowupSequence {
  std::vector<double> times;
  /// lambda_j = kappa_max(t_j), strictly increasing.
  std::vector<double> scales;
  /// Node of largest curvature on each selected state.
  std::vector<Point> basepoints;
  std::vector<std::size_t> basepoint_indices;
  /// lambda_j (Gamma_{t_j} - p_j); unit curvature at the origin.
  std::vector<Curve> rescaled_curves;
  /// Extinction time of the source trajectory.
  double extinction_time = 0.0;
};

/// Walks back from the last recorded state and keeps states whose maximal
/// curvature has at least halved relative to the previously kept one, up to
/// `count` members, returned in increasing time. Throws NotExtinct unless
/// the trajectory ended by extinction and InsufficientWindow if fewer than
/// three members can be found.
BlowupSequence extract_blowup(const Trajectory& traj, std::size_t count);

struct GrimReaperReport {
  /// sup over rescaled nodes with 0 <= x <= window_halfwidth of
  /// |y + log cos x| on the last member (after tip alignment).
  double sup_deviation = 0.0;
  double window_halfwidth = 1.0;
  /// The same deviation for every member, in sequence order.
  std::vector<double> deviations;
  /// (omega - t_j) kappa_max(t_j)^2 per member.
  std::vector<double> type2_indicator;
  /// max |kappa / cos(theta) - 1| on the last member over 0 <= x <= 0.5.
  double soliton_identity_error = 0.0;
};

/// Rotates each rescaled curve about its tip so the curve leaves the tip
/// along +x with its curvature vector pointing to +y, then compares with
/// the half Grim Reaper. Throws EmptySequence on an empty sequence.
GrimReaperReport compare_grim_reaper(const BlowupSequence& seq, double window_halfwidth = 1.0);

/// The x-monotone branch leaving the tip of a rescaled blow-up member,
/// expressed in the Grim Reaper frame (tip at the origin, tangent +x).
std::vector<Point> grim_reaper_frame(const Curve& rescaled, std::size_t tip_index);

struct AreaBalanceReport {
  /// Interior recorded times and both sides of the identity there.
  std::vector<double> times;
  std::vector<double> area_rate;
  std::vector<double> minus_turning;
  double max_discrepancy = 0.0;
  double worst_time = 0.0;
};

/// Three-point (nonuniform) time derivative of the enclosed area against
/// -(theta_max - theta_min) at interior recorded times. A trajectory with
/// fewer than three states yields an empty report.
AreaBalanceReport area_balance(const Trajectory& traj);

}  // namespace dncsf
