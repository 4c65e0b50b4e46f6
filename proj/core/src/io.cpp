#include "dncsf/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dncsf {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json point_json(Point p) { return json::array({p.x, p.y}); }

json diagnostics_json(const CurveDiagnostics& d) {
  return {{"theta_min", d.theta_min}, {"theta_max", d.theta_max}, {"kappa_max", d.kappa_max},
          {"area", d.area},           {"height_max", d.height_max}, {"length", d.length}};
}

// Non-finite values are not representable in JSON; emit null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string state_file(std::size_t i, const char* stem) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%05zu.csv", stem, i);
  return buf;
}

}  // namespace

std::string to_string(ChartKind kind) {
  switch (kind) {
    case ChartKind::ArclengthPolyline: return "ArclengthPolyline";
    case ChartKind::GraphOverXAxis: return "GraphOverXAxis";
    case ChartKind::GraphOverChord: return "GraphOverChord";
  }
  return "Unknown";
}

std::string curve_to_csv(const Curve& c) {
  std::string out = "x,y\n";
  for (const auto& p : c.nodes()) out += fmt17(p.x) + "," + fmt17(p.y) + "\n";
  return out;
}

Curve curve_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,y", 0) != 0) throw IoError("curve CSV: missing `x,y` header");
  std::vector<Point> pts;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("curve CSV: line " + std::to_string(lineno) + " has no comma");
    try {
      const double x = std::stod(line.substr(0, comma));
      const double y = std::stod(line.substr(comma + 1));
      pts.push_back({x, y});
    } catch (const std::logic_error&) {
      throw IoError("curve CSV: line " + std::to_string(lineno) + " is not numeric");
    }
  }
  return Curve(std::move(pts));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

void write_curve_csv(const std::filesystem::path& path, const Curve& c) { write_text(path, curve_to_csv(c)); }

Curve read_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return curve_from_csv(ss.str());
}

std::string curve_to_json(const Curve& c, double d) {
  json nodes = json::array();
  for (const auto& p : c.nodes()) nodes.push_back(point_json(p));
  return json{{"chart", to_string(c.chart().kind)}, {"d", d}, {"nodes", nodes}}.dump(2);
}

std::string barrier_report_json(const BarrierReport& rep) {
  return json{{"kind", to_string(rep.kind)},   {"d", rep.d},
              {"t", rep.t},                    {"samples", rep.samples},
              {"theta", rep.theta},            {"min_slack", rep.min_slack},
              {"argmin_point", point_json(rep.argmin_point)}}
      .dump(2);
}

std::string fit_json(const AsymptoticFit& fit) {
  return json{{"A", fit.A},
              {"rate", fit.rate},
              {"profile_error", fit.profile_error},
              {"window", json::array({fit.window.first, fit.window.second})},
              {"states_used", fit.states_used}}
      .dump(2);
}

std::string grim_reaper_json(const GrimReaperReport& rep) {
  json dev = json::array();
  for (double v : rep.deviations) dev.push_back(num(v));
  return json{{"sup_deviation", num(rep.sup_deviation)},
              {"window_halfwidth", rep.window_halfwidth},
              {"deviations", dev},
              {"type2_indicator", rep.type2_indicator},
              {"soliton_identity_error", num(rep.soliton_identity_error)}}
      .dump(2);
}

std::string area_balance_json(const AreaBalanceReport& rep) {
  return json{{"max_discrepancy", rep.max_discrepancy}, {"worst_time", rep.worst_time}, {"times", rep.times},
              {"area_rate", rep.area_rate},             {"minus_turning", rep.minus_turning}}
      .dump(2);
}

std::string theta_bar_ode_json(const ThetaBarOdeReport& rep) {
  return json{{"skipped", rep.skipped},
              {"reason", rep.reason},
              {"alignment_shift", rep.alignment_shift},
              {"worst_rate_margin", num(rep.worst_rate_margin)},
              {"worst_rate_time", rep.worst_rate_time},
              {"worst_comparison_margin", num(rep.worst_comparison_margin)},
              {"worst_comparison_time", rep.worst_comparison_time}}
      .dump(2);
}

std::string speed_bound_json(const SpeedBoundReport& rep) {
  return json{{"worst_margin", num(rep.worst_margin)},
              {"worst_time", rep.worst_time},
              {"worst_point", point_json(rep.worst_point)},
              {"times", rep.times},
              {"max_kappa_over_y", rep.max_kappa_over_y}}
      .dump(2);
}

std::string invariants_json(const InvariantReport& rep) {
  return json{{"kappa_margin", num(rep.kappa_margin)},
              {"kappa_s_margin", num(rep.kappa_s_margin)},
              {"curvature_lower_bound_margin", num(rep.curvature_lower_bound_margin)},
              {"gradient_lower_bound_margin", num(rep.gradient_lower_bound_margin)},
              {"theta_max_increment", num(rep.theta_max_increment)},
              {"embedded", rep.embedded},
              {"states_checked", rep.states_checked}}
      .dump(2);
}

std::string diagnostics_csv(const Trajectory& traj) {
  std::string out = "t,theta_min,theta_max,kappa_max,area,height_max,length\n";
  for (const auto& s : traj.states) {
    const auto& d = s.diagnostics;
    out += fmt17(s.time) + "," + fmt17(d.theta_min) + "," + fmt17(d.theta_max) + "," + fmt17(d.kappa_max) + "," +
           fmt17(d.area) + "," + fmt17(d.height_max) + "," + fmt17(d.length) + "\n";
  }
  return out;
}

void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj, std::optional<double> rho) {
  std::filesystem::create_directories(dir);
  json diags = json::array();
  json files = json::array();
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const auto name = state_file(i, "state");
    write_curve_csv(dir / name, traj.states[i].curve);
    files.push_back(name);
    diags.push_back(diagnostics_json(traj.states[i].diagnostics));
  }
  write_text(dir / "diagnostics.csv", diagnostics_csv(traj));
  json events = json::array();
  for (const auto& e : traj.events) events.push_back({{"time", e.time}, {"kind", to_string(e.kind)}, {"detail", e.detail}});
  json outcome = {{"kind", to_string(traj.outcome)}, {"detail", traj.detail}};
  if (traj.outcome == Outcome::Extinct) outcome["time"] = traj.extinction_time;
  const json manifest = {{"d", traj.d},
                         {"rho", rho ? json(*rho) : json(nullptr)},
                         {"N", traj.nodes},
                         {"record_every", traj.record_every},
                         {"steps", traj.steps},
                         {"times", traj.times()},
                         {"files", files},
                         {"diagnostics", diags},
                         {"events", events},
                         {"outcome", outcome}};
  write_text(dir / "manifest.json", manifest.dump(2));
}

void write_blowup(const std::filesystem::path& dir, const BlowupSequence& seq) {
  std::filesystem::create_directories(dir);
  json members = json::array();
  for (std::size_t j = 0; j < seq.rescaled_curves.size(); ++j) {
    const auto name = state_file(j, "rescaled");
    write_curve_csv(dir / name, seq.rescaled_curves[j]);
    members.push_back({{"blowup_index", j},
                       {"file", name},
                       {"time", seq.times[j]},
                       {"scale", seq.scales[j]},
                       {"basepoint", point_json(seq.basepoints[j])},
                       {"basepoint_index", seq.basepoint_indices[j]}});
  }
  write_text(dir / "manifest.json",
             json{{"extinction_time", seq.extinction_time}, {"members", members}}.dump(2));
}

}  // namespace dncsf
