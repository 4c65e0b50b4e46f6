#include "dncsf/flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

namespace dncsf {

namespace {

// Reflection of q across the line tangent to the circle |x| = |c| at c.
Point reflect_across_tangent(Point q, Point c) {
  const double r = norm(c);
  const Point u = (1.0 / r) * c;
  return q - 2.0 * (dot(q, u) - r) * u;
}

double cubic_lagrange(const std::array<double, 4>& s, const std::array<double, 4>& v, double at) {
  double out = 0.0;
  for (int i = 0; i < 4; ++i) {
    double w = 1.0;
    for (int j = 0; j < 4; ++j) {
      if (j != i) w *= (at - s[j]) / (s[i] - s[j]);
    }
    out += w * v[i];
  }
  return out;
}

// Explicit stepper working on a node buffer in place. Scratch buffers are
// kept between steps so long runs do not allocate.
class Stepper {
 public:
  explicit Stepper(std::vector<Point> nodes) : p_(std::move(nodes)) {
    trial_.resize(p_.size());
    ext_.resize(p_.size() + 4);
    s_ext_.resize(p_.size() + 4);
    update_metrics(p_);
  }

  const std::vector<Point>& nodes() const { return p_; }
  double min_spacing() const { return h_min_; }
  double length() const { return length_; }
  /// Largest |curvature vector| seen by the last accepted step.
  double kappa_max() const { return kappa_max_; }

  /// Advances by dt. Returns false (leaving the nodes untouched) if the
  /// update folds the polyline, leaves the disc, or produces non-finite or
  /// coincident nodes.
  bool advance(double dt) {
    const std::size_t n = p_.size() - 1;
    double kmax = 0.0;
    trial_[0] = p_[0];
    for (std::size_t i = 1; i < n; ++i) {
      const Point a = p_[i - 1], b = p_[i], c = p_[i + 1];
      if (a == b || b == c) return false;
      const Point v = menger_curvature_vector(a, b, c);
      kmax = std::max(kmax, norm(v));
      trial_[i] = b + dt * v;
    }
    {
      const Point ghost = reflect_across_tangent(p_[n - 1], p_[n]);
      const Point v = menger_curvature_vector(p_[n - 1], p_[n], ghost);
      kmax = std::max(kmax, norm(v));
      const Point q = p_[n] + dt * v;
      trial_[n] = (1.0 / norm(q)) * q;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (!std::isfinite(trial_[i].x) || !std::isfinite(trial_[i].y)) return false;
      if (dot(trial_[i], trial_[i]) > 1.0 + 1e-9) return false;
      if (i > 0 && trial_[i] == trial_[i - 1]) return false;
    }
    for (std::size_t i = 1; i < n; ++i) {
      if (dot(trial_[i] - trial_[i - 1], trial_[i + 1] - trial_[i]) <= 0.0) return false;
    }
    redistribute();
    kappa_max_ = kmax;
    return true;
  }

 private:
  void update_metrics(const std::vector<Point>& q) {
    h_min_ = std::numeric_limits<double>::infinity();
    length_ = 0.0;
    for (std::size_t i = 1; i < q.size(); ++i) {
      const double h = distance(q[i], q[i - 1]);
      h_min_ = std::min(h_min_, h);
      length_ += h;
    }
  }

  // Uniform redistribution in chord length of trial_ into p_, using cubic
  // interpolation on a stencil extended by two ghost nodes per side.
  void redistribute() {
    const std::size_t n = trial_.size() - 1;
    const Point o = trial_[0];
    const Point tip = trial_[n];
    for (std::size_t k = 0; k <= n; ++k) ext_[k + 2] = trial_[k];
    ext_[1] = 2.0 * o - trial_[1];
    ext_[0] = 2.0 * o - trial_[2];
    ext_[n + 3] = reflect_across_tangent(trial_[n - 1], tip);
    ext_[n + 4] = reflect_across_tangent(trial_[n - 2], tip);

    s_ext_[2] = 0.0;
    for (std::size_t k = 3; k < ext_.size(); ++k) s_ext_[k] = s_ext_[k - 1] + distance(ext_[k], ext_[k - 1]);
    s_ext_[1] = -distance(ext_[2], ext_[1]);
    s_ext_[0] = s_ext_[1] - distance(ext_[1], ext_[0]);
    const double total = s_ext_[n + 2];

    p_[0] = o;
    p_[n] = tip;
    std::size_t j = 0;  // node interval [j, j + 1] containing the target
    for (std::size_t k = 1; k < n; ++k) {
      const double target = total * static_cast<double>(k) / static_cast<double>(n);
      while (j + 1 < n && s_ext_[j + 3] < target) ++j;
      const std::size_t e = j + 1;  // ext index of node j - 1
      const std::array<double, 4> s{s_ext_[e], s_ext_[e + 1], s_ext_[e + 2], s_ext_[e + 3]};
      const std::array<double, 4> xs{ext_[e].x, ext_[e + 1].x, ext_[e + 2].x, ext_[e + 3].x};
      const std::array<double, 4> ys{ext_[e].y, ext_[e + 1].y, ext_[e + 2].y, ext_[e + 3].y};
      p_[k] = Point{cubic_lagrange(s, xs, target), cubic_lagrange(s, ys, target)};
    }
    update_metrics(p_);
  }

  std::vector<Point> p_;
  std::vector<Point> trial_;
  std::vector<Point> ext_;
  std::vector<double> s_ext_;
  double h_min_ = 0.0;
  double length_ = 0.0;
  double kappa_max_ = 0.0;
};

// Nonuniform three-point derivative at the middle time.
double central_derivative(double t0, double f0, double t1, double f1, double t2, double f2) {
  const double h0 = t1 - t0, h1 = t2 - t1;
  return -h1 / (h0 * (h0 + h1)) * f0 + (h1 - h0) / (h0 * h1) * f1 + h0 / (h1 * (h0 + h1)) * f2;
}

}  // namespace

FlowState FlowState::at(Curve c, double time, long step) {
  CurveDiagnostics diag = diagnose(c);
  return FlowState{std::move(c), time, diag, step};
}

StopRule default_stop_rule(double d) {
  return d < 1.0 ? StopRule::converged(1e-3) : StopRule::extinct(1e-2, 1e3);
}

void FlowRunConfig::validate() const {
  ProblemConfig{d};
  if (nodes < kMinIntervals) throw DomainError("flow: node budget N must be at least 8");
  if (!(dt_safety > 0.0 && dt_safety <= 0.5)) throw DomainError("flow: dt_safety must lie in (0, 0.5]");
  if (!(stop.eps > 0.0)) throw DomainError("flow: stop tolerance must be positive");
  if (record_every < 1) throw DomainError("flow: record_every must be >= 1");
  if (t_end && !(*t_end > t_start)) throw DomainError("flow: t_end must exceed the start time");
  if (stop.kind == StopKind::MaxTime && !t_end) throw DomainError("flow: MaxTime stop rule needs t_end");
  if (distance(initial.front(), Point{-d, 0.0}) > kGeomEps) {
    throw InvalidCurve("flow: initial curve must start at o = (-d, 0)");
  }
  if (std::abs(norm(initial.back()) - 1.0) > kGeomEps) {
    throw InvalidCurve("flow: initial curve must end on the unit circle");
  }
  for (const auto& p : initial.nodes()) {
    if (p.y < -kGeomEps) throw InvalidCurve("flow: initial curve must lie in the closed upper half disc");
  }
}

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Start: return "Start";
    case EventKind::StepRetried: return "StepRetried";
    case EventKind::ThetaBarHalfPi: return "ThetaBarHalfPi";
    case EventKind::Converged: return "Converged";
    case EventKind::Extinct: return "Extinct";
    case EventKind::MaxTime: return "MaxTime";
    case EventKind::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::ConvergedToMinimizer: return "ConvergedToMinimizer";
    case Outcome::Extinct: return "Extinct";
    case Outcome::MaxTimeReached: return "MaxTimeReached";
    case Outcome::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  t.reserve(states.size());
  for (const auto& s : states) t.push_back(s.time);
  return t;
}

double tol_inv(const CurveDiagnostics& diag) { return 1e-3 * (1.0 + std::max(0.0, diag.kappa_max)); }

double min_spacing(const Curve& c) {
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < c.size(); ++i) h = std::min(h, distance(c.node(i), c.node(i - 1)));
  return h;
}

FlowState step(const FlowState& state, double dt) {
  const double h = min_spacing(state.curve);
  if (!(dt > 0.0)) throw DomainError("step: dt must be positive");
  if (dt > kStabilityLimit * h * h * (1.0 + 1e-12)) {
    throw DomainError("step: dt exceeds the explicit stability limit 0.5 h_min^2");
  }
  Stepper st(std::vector<Point>(state.curve.nodes().begin(), state.curve.nodes().end()));
  if (!st.advance(dt)) throw StepRejected("step: update folds the curve or leaves the disc");
  return FlowState::at(Curve(st.nodes()), state.time + dt, state.step + 1);
}

double extinction_estimate(const FlowState& s) {
  const double sweep = s.diagnostics.theta_max - s.diagnostics.theta_min;
  if (!(sweep > 0.0)) return s.time;
  return s.time + std::max(0.0, s.diagnostics.area) / sweep;
}

std::pair<double, double> min_kappa_and_kappa_s(const Curve& c) {
  const auto prof = curvature_profile(c);
  double kmin = std::numeric_limits<double>::infinity();
  double ksmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < prof.size(); ++i) {
    kmin = std::min(kmin, prof[i].kappa);
    if (i + 1 < prof.size()) {
      const double ds = prof[i + 1].arclength - prof[i].arclength;
      ksmin = std::min(ksmin, (prof[i + 1].kappa - prof[i].kappa) / ds);
    }
  }
  return {kmin, ksmin};
}

Trajectory run(const FlowRunConfig& cfg) {
  cfg.validate();
  Curve start = cfg.initial.intervals() == cfg.nodes ? cfg.initial : resample_arclength(cfg.initial, cfg.nodes);

  Trajectory traj;
  traj.d = cfg.d;
  traj.nodes = cfg.nodes;
  traj.record_every = cfg.record_every;

  Stepper st(std::vector<Point>(start.nodes().begin(), start.nodes().end()));
  double t = cfg.t_start;
  long steps = 0;
  bool crossed_half_pi = false;

  auto finish = [&](Outcome outcome, EventKind kind, std::string detail) {
    traj.outcome = outcome;
    traj.detail = detail;
    traj.events.push_back({t, kind, std::move(detail)});
    traj.steps = steps;
  };

  // Records the current state; returns a non-empty message on a violated
  // invariant.
  auto record = [&]() -> std::string {
    traj.states.push_back(FlowState::at(Curve(st.nodes()), t, steps));
    const FlowState& s = traj.states.back();
    if (!crossed_half_pi && s.diagnostics.theta_max >= 0.5 * kPi) {
      crossed_half_pi = true;
      traj.events.push_back({t, EventKind::ThetaBarHalfPi, ""});
    }
    if (cfg.progress) cfg.progress(s);
    if (!is_embedded(s.curve)) return "curve is not embedded";
    if (cfg.check_sign_invariants && steps > 10) {
      const auto [kmin, ksmin] = min_kappa_and_kappa_s(s.curve);
      const double tol = tol_inv(s.diagnostics);
      if (kmin < -tol) return "kappa < -tol_inv (" + std::to_string(kmin) + ")";
      if (ksmin < -tol) return "kappa_s < -tol_inv (" + std::to_string(ksmin) + ")";
    }
    return {};
  };

  traj.events.push_back({t, EventKind::Start, ""});
  if (auto bad = record(); !bad.empty()) {
    finish(Outcome::InvariantViolation, EventKind::InvariantViolation, bad);
    return traj;
  }

  while (true) {
    if (cfg.t_end && t >= *cfg.t_end) {
      if (traj.states.back().step != steps) record();
      finish(Outcome::MaxTimeReached, EventKind::MaxTime, "");
      return traj;
    }
    if (steps >= cfg.max_steps) {
      if (traj.states.back().step != steps) record();
      finish(Outcome::MaxTimeReached, EventKind::MaxTime, "step budget exhausted");
      return traj;
    }
    const double h = st.min_spacing();
    double dt = cfg.dt_safety * h * h;
    if (cfg.t_end) dt = std::min(dt, *cfg.t_end - t);

    bool ok = st.advance(dt);
    for (int retry = 0; !ok && retry < 20; ++retry) {
      dt *= 0.5;
      traj.events.push_back({t, EventKind::StepRetried, "dt = " + std::to_string(dt)});
      ok = st.advance(dt);
    }
    if (!ok) {
      finish(Outcome::InvariantViolation, EventKind::InvariantViolation, "step rejected 20 times");
      return traj;
    }
    t += dt;
    ++steps;

    const bool extinct = cfg.stop.kind == StopKind::Extinct &&
                         (st.length() < cfg.stop.eps || st.kappa_max() > cfg.stop.kappa_cap);
    if (extinct || steps % cfg.record_every == 0) {
      if (auto bad = record(); !bad.empty()) {
        finish(Outcome::InvariantViolation, EventKind::InvariantViolation, bad);
        return traj;
      }
      const FlowState& s = traj.states.back();
      if (extinct) {
        traj.extinction_time = extinction_estimate(s);
        finish(Outcome::Extinct, EventKind::Extinct, "omega ~ " + std::to_string(traj.extinction_time));
        return traj;
      }
      if (cfg.stop.kind == StopKind::Converged && s.diagnostics.kappa_max < cfg.stop.eps &&
          hausdorff_to_segment(s.curve, Point{-cfg.d, 0.0}, Point{-1.0, 0.0}) < cfg.stop.eps) {
        finish(Outcome::ConvergedToMinimizer, EventKind::Converged, "");
        return traj;
      }
    }
  }
}

std::optional<double> half_pi_time(const Trajectory& traj) {
  const auto& st = traj.states;
  for (std::size_t i = 1; i < st.size(); ++i) {
    const double a = st[i - 1].diagnostics.theta_max, b = st[i].diagnostics.theta_max;
    if (a < 0.5 * kPi && b >= 0.5 * kPi) {
      const double w = (0.5 * kPi - a) / (b - a);
      return st[i - 1].time + w * (st[i].time - st[i - 1].time);
    }
  }
  if (!st.empty() && st.front().diagnostics.theta_max == 0.5 * kPi) return st.front().time;
  return std::nullopt;
}

ThetaBarOdeReport theta_bar_ode_check(const Trajectory& traj, double tol) {
  ThetaBarOdeReport rep;
  const auto& st = traj.states;
  double peak = 0.0;
  for (const auto& s : st) peak = std::max(peak, std::abs(s.diagnostics.theta_max));
  if (peak < 1e-9) {
    rep.skipped = true;
    rep.reason = "theta_max vanishes identically (stationary arc)";
    return rep;
  }
  if (st.size() < 3) {
    rep.skipped = true;
    rep.reason = "fewer than three recorded states";
    return rep;
  }
  const ProblemConfig cfg(traj.d);

  rep.worst_rate_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < st.size(); ++i) {
    const double rate = central_derivative(st[i - 1].time, st[i - 1].diagnostics.theta_max, st[i].time,
                                           st[i].diagnostics.theta_max, st[i + 1].time,
                                           st[i + 1].diagnostics.theta_max);
    const double th = st[i].diagnostics.theta_max;
    // Relative to the size of the rate so the check stays meaningful as the
    // curvature blows up near extinction.
    const double margin = (rate - characteristic_rate(cfg, th)) / (1.0 + std::max(0.0, st[i].diagnostics.kappa_max));
    if (margin < rep.worst_rate_margin) {
      rep.worst_rate_margin = margin;
      rep.worst_rate_time = st[i].time;
    }
  }

  rep.worst_comparison_margin = std::numeric_limits<double>::infinity();
  if (const auto t0 = half_pi_time(traj)) {
    rep.alignment_shift = -*t0;
    for (const auto& s : st) {
      const double tau = s.time - *t0;
      if (tau > 0.0) break;
      const double margin = theta_minus(cfg, tau) - s.diagnostics.theta_max;
      if (margin < rep.worst_comparison_margin) {
        rep.worst_comparison_margin = margin;
        rep.worst_comparison_time = tau;
      }
    }
  } else {
    rep.reason = "theta_max never reaches pi/2; comparison with theta_minus skipped";
  }

  if (rep.worst_rate_margin < -tol) {
    throw ComparisonViolation("theta_bar_ode_check: d(theta_max)/dt below the characteristic rate",
                              rep.worst_rate_time, rep.worst_rate_margin);
  }
  if (rep.worst_comparison_margin < -tol) {
    throw ComparisonViolation("theta_bar_ode_check: theta_max exceeds theta_minus", rep.worst_comparison_time,
                              rep.worst_comparison_margin);
  }
  return rep;
}

double max_kappa_over_y(const Curve& c) {
  const auto prof = curvature_profile(c);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < prof.size(); ++i) {
    const double y = c.node(i).y;
    if (y > 0.0) best = std::max(best, prof[i].kappa / y);
  }
  return best;
}

SpeedBoundReport speed_bound_check(const Trajectory& traj, double lambda_ref, double tol) {
  SpeedBoundReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& s : traj.states) {
    const auto prof = curvature_profile(s.curve);
    for (std::size_t i = 0; i < prof.size(); ++i) {
      const double c = std::cos(prof[i].theta);
      if (c <= 0.1) continue;
      const Point p = s.curve.node(i);
      const double arg = lambda_ref * p.y;
      const double bound = arg < 0.5 * kPi ? lambda_ref * std::tan(arg) : std::numeric_limits<double>::infinity();
      const double margin = prof[i].kappa / c - bound;
      if (margin < rep.worst_margin) {
        rep.worst_margin = margin;
        rep.worst_time = s.time;
        rep.worst_point = p;
      }
    }
    rep.times.push_back(s.time);
    rep.max_kappa_over_y.push_back(max_kappa_over_y(s.curve));
  }
  if (rep.worst_margin < -tol) {
    throw ComparisonViolation("speed_bound_check: kappa/cos(theta) below lambda tan(lambda y)", rep.worst_time,
                              rep.worst_margin);
  }
  return rep;
}

InvariantReport check_invariants(const Trajectory& traj, long transient_steps) {
  InvariantReport rep;
  const ProblemConfig cfg(traj.d);
  const double inf = std::numeric_limits<double>::infinity();
  rep.kappa_margin = rep.kappa_s_margin = rep.curvature_lower_bound_margin = inf;
  rep.gradient_lower_bound_margin = inf;
  rep.theta_max_increment = inf;
  const FlowState* prev = nullptr;
  for (const auto& s : traj.states) {
    if (s.step <= transient_steps) continue;
    ++rep.states_checked;
    const auto& dg = s.diagnostics;
    const double tol = tol_inv(dg);
    const auto [kmin, ksmin] = min_kappa_and_kappa_s(s.curve);
    rep.kappa_margin = std::min(rep.kappa_margin, kmin + tol);
    rep.kappa_s_margin = std::min(rep.kappa_s_margin, ksmin + tol);
    rep.curvature_lower_bound_margin =
        std::min(rep.curvature_lower_bound_margin, dg.kappa_max - characteristic_rate(cfg, dg.theta_max) + tol);
    if (traj.d < 1.0) {
      const double bound = std::atan2(cfg.b() * std::sin(dg.theta_max), 1.0 + cfg.a() * std::cos(dg.theta_max));
      rep.gradient_lower_bound_margin = std::min(rep.gradient_lower_bound_margin, dg.theta_min - bound + tol);
    }
    if (prev) rep.theta_max_increment = std::min(rep.theta_max_increment, dg.theta_max - prev->diagnostics.theta_max);
    rep.embedded = rep.embedded && is_embedded(s.curve);
    prev = &s;
  }
  return rep;
}

}  // namespace dncsf
