#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <future>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dncsf/analysis.hpp"
#include "dncsf/barriers.hpp"
#include "dncsf/flow.hpp"
#include "dncsf/hairclip.hpp"
#include "dncsf/io.hpp"

namespace dncsf::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Params {
  double d = 0.5;
  std::vector<double> rho;
  double theta = 0.3;
  std::size_t nodes = 128;
  std::optional<double> t_end;
  std::string out;
  int record_every = 0;  // 0: 100 (N / 128)^2, so recorded times match across N
  std::vector<double> times;
  int samples = 256;
  std::size_t count = 6;
  double eps = 1e-3;
  double tol_barrier = kBarrierSlackTol;
  double tol_ode = kTolOde;
  double tol_speed = 1e-3;
  double tol_area = 5e-3;
  double tol_pair = 1e-8;
  double tol_grim = 5e-2;
  double tol_rate = 3e-2;
  double tol_profile = 2e-2;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw UsageError(msg);
}

void validate_common(const Params& p) {
  require(p.d > 0.0 && p.d <= 1.0, "d must lie in (0, 1]");
  require(p.nodes >= kMinIntervals, "nodes must be at least 8");
  require(p.record_every >= 0, "record-every must be positive");
  require(!p.t_end || *p.t_end > 0.0, "t-end must be positive");
  require(p.samples >= 16, "samples must be at least 16");
  require(p.count >= 3, "count must be at least 3");
  for (double tol : {p.eps, p.tol_barrier, p.tol_ode, p.tol_speed, p.tol_area, p.tol_pair, p.tol_grim, p.tol_rate,
                     p.tol_profile}) {
    require(std::isfinite(tol) && tol > 0.0, "tolerances must be positive");
  }
  for (double r : p.rho) require(r > 0.0 && r < 0.5 * kPi, "rho must lie in (0, pi/2)");
}

double single_rho(const Params& p) {
  require(p.rho.size() <= 1, "this command takes a single rho");
  return p.rho.empty() ? 0.3 : p.rho.front();
}

fs::path output_dir(const Params& p, const std::string& command) {
  if (!p.out.empty()) return p.out;
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &tm);
  return fs::path("runs") / (command + "-" + buf);
}

FlowRunConfig flow_config(const Params& p, double rho) {
  FlowRunConfig cfg(p.d, initial_curve(rho, p.d, p.nodes));
  cfg.nodes = p.nodes;
  cfg.t_end = p.t_end;
  if (p.d < 1.0) cfg.stop = StopRule::converged(p.eps);
  const double scale = static_cast<double>(p.nodes) / 128.0;
  cfg.record_every = p.record_every > 0 ? p.record_every : std::max(1, static_cast<int>(std::lround(100 * scale * scale)));
  return cfg;
}

json trajectory_summary(const Trajectory& traj) {
  json j = {{"outcome", to_string(traj.outcome)}, {"detail", traj.detail}, {"steps", traj.steps},
            {"states", traj.states.size()}, {"final_time", traj.states.back().time}};
  if (traj.outcome == Outcome::Extinct) j["extinction_time"] = traj.extinction_time;
  return j;
}

// Collects named checks with margins (>= 0 passes) into a report.
class Suite {
 public:
  void add(const std::string& name, bool passed, double margin, const std::string& detail = {}) {
    checks_.push_back({{"name", name}, {"passed", passed}, {"margin", std::isfinite(margin) ? json(margin) : json(nullptr)},
                       {"detail", detail}});
    if (!passed && first_failure_.empty()) first_failure_ = name;
  }
  void margin(const std::string& name, double m, const std::string& detail = {}) { add(name, m >= 0.0, m, detail); }
  bool passed() const { return first_failure_.empty(); }
  const std::string& first_failure() const { return first_failure_; }
  json report() const { return {{"passed", passed()}, {"checks", checks_}}; }

 private:
  json checks_ = json::array();
  std::string first_failure_;
};

std::vector<double> barrier_times(const Params& p, const ProblemConfig& cfg) {
  if (!p.times.empty()) return p.times;
  return dn_time_grid(cfg, 20);
}

// --- commands ------------------------------------------------------------

int cmd_barriers(const Params& p, std::ostream& out) {
  const ProblemConfig cfg(p.d);
  const auto dir = output_dir(p, "barriers");
  json rows = json::array();
  bool ok = true;
  auto check = [&](ArcKind kind, double t, const std::string& file) {
    BarrierReport rep;
    try {
      rep = verify_barrier_inequality(cfg, kind, t, p.samples);
    } catch (const BarrierViolation& v) {
      rep = v.report();
    }
    const bool pass = rep.min_slack >= -p.tol_barrier;
    ok = ok && pass;
    write_text(dir / file, barrier_report_json(rep));
    rows.push_back({{"kind", to_string(kind)}, {"t", t}, {"min_slack", rep.min_slack}, {"passed", pass}});
  };
  const auto times = barrier_times(p, cfg);
  for (std::size_t i = 0; i < times.size(); ++i) {
    require(times[i] < cfg.omega(), "barrier times must lie below omega_d");
    check(ArcKind::DirichletNeumann, times[i], "dn_" + std::to_string(i) + ".json");
  }
  for (int i = 0; i < 20; ++i) {
    const double t = -10.0 + (10.0 - 0.05) * i / 19.0;
    check(ArcKind::NeumannNeumann, t, "nn_" + std::to_string(i) + ".json");
  }
  const json summary = {{"d", p.d}, {"samples", p.samples}, {"passed", ok}, {"reports", rows}};
  write_text(dir / "summary.json", summary.dump(2));
  out << summary.dump(2) << "\n";
  return ok ? kExitPass : kExitCheckFailed;
}

int cmd_pair(const Params& p, std::ostream& out) {
  require(p.theta > 0.0 && p.theta < 0.5 * kPi, "theta must lie in (0, pi/2)");
  const auto pair = solve_orthogonal_pair(p.theta, p.d);
  const auto eig = lambda0(p.d);
  const json j = {{"theta", p.theta},
                  {"d", p.d},
                  {"lambda", pair.lambda},
                  {"t", pair.t},
                  {"contact_residual", pair.contact_residual},
                  {"radial_residual", pair.radial_residual},
                  {"lambda0", eig.lambda0},
                  {"lambda0_residual", eig.residual()}};
  out << j.dump(2) << "\n";
  if (!p.out.empty()) write_text(fs::path(p.out) / "pair.json", j.dump(2));
  return pair.radial_residual < p.tol_pair ? kExitPass : kExitCheckFailed;
}

int cmd_flow(const Params& p, std::ostream& out) {
  const double rho = single_rho(p);
  const auto traj = run(flow_config(p, rho));
  const auto dir = output_dir(p, "flow");
  write_trajectory(dir, traj, rho);
  out << trajectory_summary(traj).dump(2) << "\n";
  return traj.outcome == Outcome::InvariantViolation ? kExitCheckFailed : kExitPass;
}

json ancient_row(const Params& p, double rho, const fs::path& dir) {
  json row = {{"rho", rho}};
  try {
    const auto pair = solve_orthogonal_pair(rho, p.d);
    row["lambda_rho"] = pair.lambda;
    row["t_rho"] = pair.t;
    auto cfg = flow_config(p, rho);
    cfg.t_start = pair.t;
    const auto traj = run(cfg);
    write_trajectory(dir, traj, rho);
    row["outcome"] = to_string(traj.outcome);
    if (traj.outcome == Outcome::Extinct) row["extinction_time"] = traj.extinction_time;
    const auto fit = fit_asymptotics(traj, lambda0(p.d).lambda0, p.d);
    row["rate"] = fit.rate;
    row["A"] = fit.A;
    row["profile_error"] = fit.profile_error;
  } catch (const std::exception& e) {
    row["error"] = e.what();
  }
  return row;
}

int cmd_ancient(const Params& p, std::ostream& out) {
  std::vector<double> rhos = p.rho;
  if (rhos.empty()) rhos = {0.3, 0.1, 0.03};
  for (std::size_t i = 1; i < rhos.size(); ++i) require(rhos[i] < rhos[i - 1], "rho list must be decreasing");
  const auto dir = output_dir(p, "ancient");
  std::vector<std::future<json>> jobs;
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    const fs::path sub = dir / ("rho_" + std::to_string(i));
    jobs.push_back(std::async(std::launch::async, ancient_row, std::cref(p), rhos[i], sub));
  }
  json rows = json::array();
  bool ok = true;
  for (auto& j : jobs) {
    rows.push_back(j.get());
    ok = ok && !rows.back().contains("error");
  }
  const json summary = {{"d", p.d}, {"N", p.nodes}, {"lambda0", lambda0(p.d).lambda0}, {"rows", rows}};
  write_text(dir / "summary.json", summary.dump(2));
  out << summary.dump(2) << "\n";
  return ok ? kExitPass : kExitCheckFailed;
}

int cmd_blowup(const Params& p, std::ostream& out) {
  const double rho = single_rho(p);
  const auto traj = run(flow_config(p, rho));
  const auto seq = extract_blowup(traj, p.count);
  const auto rep = compare_grim_reaper(seq);
  const auto dir = output_dir(p, "blowup");
  write_blowup(dir, seq);
  write_text(dir / "grim_reaper.json", grim_reaper_json(rep));
  out << grim_reaper_json(rep) << "\n";
  const bool type2 = std::is_sorted(rep.type2_indicator.begin(), rep.type2_indicator.end());
  return (rep.sup_deviation < p.tol_grim && rep.soliton_identity_error < p.tol_grim && type2) ? kExitPass
                                                                                                : kExitCheckFailed;
}

int cmd_fit(const Params& p, std::ostream& out) {
  const double rho = p.rho.empty() ? 0.01 : single_rho(p);
  const auto traj = run(flow_config(p, rho));
  const double l0 = lambda0(p.d).lambda0;
  const auto fit = fit_asymptotics(traj, l0, p.d);
  if (!p.out.empty()) write_text(fs::path(p.out) / "fit.json", fit_json(fit));
  out << fit_json(fit) << "\n";
  const bool ok = std::abs(fit.rate - l0 * l0) / (l0 * l0) < p.tol_rate && fit.profile_error < p.tol_profile;
  return ok ? kExitPass : kExitCheckFailed;
}

int cmd_verify(const Params& p, std::ostream& out, std::ostream& err) {
  const ProblemConfig cfg(p.d);
  const double rho = single_rho(p);
  Suite suite;

  // Closed-form barrier angle against RK4 integration of the characteristic ODE.
  {
    const double hi = std::min(cfg.omega() - 0.01, 5.0);
    double worst = 0.0;
    double th = 0.5 * kPi, t = 0.0;
    for (double target = 0.0; target <= hi + 1e-12; target += 0.25) {
      th = integrate_characteristic(cfg, th, t, target);
      t = target;
      worst = std::max(worst, std::abs(th - theta_minus(cfg, t)));
    }
    th = 0.5 * kPi;
    t = 0.0;
    for (double target = 0.0; target >= -10.0; target -= 0.25) {
      th = integrate_characteristic(cfg, th, t, target);
      t = target;
      worst = std::max(worst, std::abs(th - theta_minus(cfg, t)));
    }
    suite.margin("barrier_ode", 1e-8 - worst, "max |theta_rk4 - theta_minus| = " + sci(worst));
  }
  // Barrier inequalities.
  {
    double worst = std::numeric_limits<double>::infinity();
    for (double t : barrier_times(p, cfg)) {
      try {
        worst = std::min(worst, verify_barrier_inequality(cfg, ArcKind::DirichletNeumann, t, p.samples).min_slack);
      } catch (const BarrierViolation& v) {
        worst = std::min(worst, v.report().min_slack);
      }
    }
    suite.margin("barrier_dn", worst + p.tol_barrier);
    worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 20; ++i) {
      const double t = -10.0 + 9.95 * i / 19.0;
      try {
        worst = std::min(worst, verify_barrier_inequality(cfg, ArcKind::NeumannNeumann, t, p.samples).min_slack);
      } catch (const BarrierViolation& v) {
        worst = std::min(worst, v.report().min_slack);
      }
    }
    suite.margin("barrier_nn", worst + p.tol_barrier);
  }
  // Eigenvalue and pairing residuals.
  {
    suite.margin("eigenvalue", 1e-12 - lambda0(p.d).residual());
    double worst = 0.0;
    for (int i = 1; i <= 10; ++i) {
      const double th = 0.5 * kPi * i / 11.0;
      worst = std::max(worst, solve_orthogonal_pair(th, p.d).radial_residual);
    }
    worst = std::max(worst, solve_orthogonal_pair(rho, p.d).radial_residual);
    suite.margin("pairing", p.tol_pair - worst);
  }
  // Flow run and runtime invariants.
  {
    const auto traj = run(flow_config(p, rho));
    const Outcome expected = p.d < 1.0 ? Outcome::ConvergedToMinimizer : Outcome::Extinct;
    const bool ok_outcome = traj.outcome == expected || (p.t_end && traj.outcome == Outcome::MaxTimeReached);
    suite.add("flow_outcome", ok_outcome, ok_outcome ? 0.0 : -1.0, to_string(traj.outcome) + " " + traj.detail);
    try {
      const auto r = theta_bar_ode_check(traj, p.tol_ode);
      suite.margin("theta_bar_ode", std::min(r.worst_rate_margin, r.worst_comparison_margin) + p.tol_ode);
    } catch (const ComparisonViolation& e) {
      suite.add("theta_bar_ode", false, e.margin() + p.tol_ode, e.what());
    }
    try {
      const auto r = speed_bound_check(traj, solve_orthogonal_pair(rho, p.d).lambda, p.tol_speed);
      suite.margin("speed_bound", r.worst_margin + p.tol_speed);
    } catch (const ComparisonViolation& e) {
      suite.add("speed_bound", false, e.margin() + p.tol_speed, e.what());
    }
    const auto inv = check_invariants(traj);
    suite.margin("kappa_nonnegative", inv.kappa_margin);
    suite.margin("kappa_s_nonnegative", inv.kappa_s_margin);
    suite.margin("curvature_lower_bound", inv.curvature_lower_bound_margin);
    if (p.d < 1.0) suite.margin("gradient_lower_bound", inv.gradient_lower_bound_margin);
    suite.margin("theta_max_nondecreasing", inv.theta_max_increment + 1e-12);
    suite.add("embedded", inv.embedded, inv.embedded ? 0.0 : -1.0);
    suite.margin("area_balance", p.tol_area - area_balance(traj).max_discrepancy);
  }

  const json report = suite.report();
  out << report.dump(2) << "\n";
  if (!p.out.empty()) write_text(fs::path(p.out) / "verify.json", report.dump(2));
  if (!suite.passed()) {
    err << "verify: check failed: " << suite.first_failure() << "\n";
    return kExitCheckFailed;
  }
  return kExitPass;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Params p;
  CLI::App app{"Curve shortening flow in the unit disc with Dirichlet-Neumann boundary conditions"};
  app.set_config("--config", "", "Flat key=value file; keys are long option names without dashes");
  app.require_subcommand(1);

  app.add_option("--d", p.d, "Dirichlet offset: o = (-d, 0), d in (0, 1]")->capture_default_str();
  app.add_option("--rho", p.rho, "Initial contact angle(s) on the circle, in (0, pi/2)");
  app.add_option("--theta", p.theta, "Contact angle for the pairing solver, in (0, pi/2)")->capture_default_str();
  app.add_option("--nodes", p.nodes, "Node budget N (N + 1 nodes)")->capture_default_str();
  app.add_option("--t-end", p.t_end, "Stop flows at this time");
  app.add_option("--out", p.out, "Output directory (default runs/<command>-<UTC timestamp>)");
  app.add_option("--record-every", p.record_every, "Steps between recorded states (default 100 (N/128)^2)");
  app.add_option("--times", p.times, "DN barrier times (default: 20 times from -10 with angles evenly spaced up to pi - 0.05)");
  app.add_option("--samples", p.samples, "Samples per barrier arc")->capture_default_str();
  app.add_option("--count", p.count, "Blow-up sequence length")->capture_default_str();
  app.add_option("--eps", p.eps, "Convergence tolerance for d < 1")->capture_default_str();
  app.add_option("--tol-barrier", p.tol_barrier, "Barrier slack tolerance")->capture_default_str();
  app.add_option("--tol-ode", p.tol_ode, "theta_max ODE comparison tolerance")->capture_default_str();
  app.add_option("--tol-speed", p.tol_speed, "Sharp speed bound tolerance")->capture_default_str();
  app.add_option("--tol-area", p.tol_area, "Area identity tolerance")->capture_default_str();
  app.add_option("--tol-pair", p.tol_pair, "Pairing orthogonality tolerance (radians)")->capture_default_str();
  app.add_option("--tol-grim", p.tol_grim, "Grim Reaper deviation tolerance")->capture_default_str();
  app.add_option("--tol-rate", p.tol_rate, "Relative tolerance on the fitted rate")->capture_default_str();
  app.add_option("--tol-profile", p.tol_profile, "Tolerance on the fitted profile error")->capture_default_str();

  auto* barriers = app.add_subcommand("barriers", "Verify the DN and NN barrier inequalities")->fallthrough();
  auto* pair = app.add_subcommand("pair", "Solve for the orthogonal hairclip slice at --theta")->fallthrough();
  auto* flow = app.add_subcommand("flow", "Run the flow from the orthogonal slice at --rho")->fallthrough();
  auto* ancient = app.add_subcommand("ancient", "Sweep decreasing --rho values and fit asymptotics")->fallthrough();
  auto* blowup = app.add_subcommand("blowup", "Extinction run, blow-up sequence and Grim Reaper comparison")->fallthrough();
  auto* fit = app.add_subcommand("fit", "Backward-in-time asymptotics fit")->fallthrough();
  auto* verify = app.add_subcommand("verify", "Run the full invariant suite")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    validate_common(p);
    if (*barriers) return cmd_barriers(p, out);
    if (*pair) return cmd_pair(p, out);
    if (*flow) return cmd_flow(p, out);
    if (*ancient) return cmd_ancient(p, out);
    if (*blowup) return cmd_blowup(p, out);
    if (*fit) return cmd_fit(p, out);
    if (*verify) return cmd_verify(p, out, err);
  } catch (const UsageError& e) {
    err << "invalid parameter: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "invalid parameter: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitUsage;
}

}  // namespace dncsf::cli
