#pragma once

// File formats: curves as CSV (`x,y`, 17 significant digits) or JSON,
// barrier and analysis reports as JSON, and trajectory directories holding
// one CSV per recorded state, a diagnostics CSV and a manifest.

#include <filesystem>
#include <optional>
#include <string>

#include "dncsf/analysis.hpp"
#include "dncsf/barriers.hpp"
#include "dncsf/flow.hpp"
#include "dncsf/geometry.hpp"

namespace dncsf {

class IoError : public Error {
 public:
  using Error::Error;
};

std::string to_string(ChartKind kind);

/// `x,y` header and one node per line.
std::string curve_to_csv(const Curve& c);
Curve curve_from_csv(const std::string& text);
void write_curve_csv(const std::filesystem::path& path, const Curve& c);
Curve read_curve_csv(const std::filesystem::path& path);

/// {"chart": ..., "d": ..., "nodes": [[x, y], ...]}
std::string curve_to_json(const Curve& c, double d);

/// {"kind", "d", "t", "samples", "theta", "min_slack", "argmin_point"}
std::string barrier_report_json(const BarrierReport& rep);

std::string fit_json(const AsymptoticFit& fit);
std::string grim_reaper_json(const GrimReaperReport& rep);
std::string area_balance_json(const AreaBalanceReport& rep);
std::string theta_bar_ode_json(const ThetaBarOdeReport& rep);
std::string speed_bound_json(const SpeedBoundReport& rep);
std::string invariants_json(const InvariantReport& rep);

/// `t,theta_min,theta_max,kappa_max,area,height_max,length`
std::string diagnostics_csv(const Trajectory& traj);

/// Writes state_NNNNN.csv per recorded state, diagnostics.csv and
/// manifest.json {d, rho, N, times, diagnostics, events, outcome} into dir
/// (created if needed).
void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj, std::optional<double> rho);

/// Writes rescaled_NN.csv per member and manifest.json with one entry per
/// member carrying its blowup_index, time, scale and basepoint.
void write_blowup(const std::filesystem::path& dir, const BlowupSequence& seq);

/// Writes text to path, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace dncsf
