#include "dncsf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dncsf {

namespace {

constexpr int kProfileSamples = 512;

// Linear interpolation of a graph y(x) given by nodes with increasing x.
double graph_at(std::span<const Point> p, double x) {
  auto it = std::lower_bound(p.begin(), p.end(), x, [](const Point& q, double v) { return q.x < v; });
  if (it == p.begin()) return p.front().y;
  if (it == p.end()) return p.back().y;
  const Point b = *it, a = *(it - 1);
  return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
}

// Trapezoid weights on a uniform grid.
double trapezoid_weight(int k, int n) { return (k == 0 || k == n) ? 0.5 : 1.0; }

double central_derivative(double t0, double f0, double t1, double f1, double t2, double f2) {
  const double h0 = t1 - t0, h1 = t2 - t1;
  return -h1 / (h0 * (h0 + h1)) * f0 + (h1 - h0) / (h0 * h1) * f1 + h0 / (h1 * (h0 + h1)) * f2;
}

}  // namespace

AsymptoticFit fit_asymptotics(const Trajectory& traj, double lambda0, double d) {
  if (!(lambda0 > 0.0)) throw DomainError("fit_asymptotics: lambda0 must be positive");
  std::size_t m = 0;
  while (m < traj.states.size() && traj.states[m].diagnostics.theta_max < kFitThetaMax &&
         traj.states[m].diagnostics.height_max > 0.0) {
    ++m;
  }
  if (m < kFitMinStates) {
    throw InsufficientWindow("fit_asymptotics: only " + std::to_string(m) +
                             " leading states with theta_max < 0.2 (need 10)");
  }

  AsymptoticFit fit;
  fit.states_used = m;
  fit.window = {traj.states.front().time, traj.states[m - 1].time};

  // Rate: least-squares slope of log(max height).
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double t = traj.states[i].time, y = std::log(traj.states[i].diagnostics.height_max);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  const double mm = static_cast<double>(m);
  fit.rate = (mm * sty - st * sy) / (mm * stt - st * st);

  // Common x-range of the window states.
  double x_hi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) x_hi = std::min(x_hi, traj.states[i].curve.back().x);
  const double x_lo = -d;
  if (!(x_hi > x_lo)) throw InsufficientWindow("fit_asymptotics: empty common x-range");

  std::vector<double> basis(kProfileSamples + 1);
  for (int k = 0; k <= kProfileSamples; ++k) {
    const double x = x_lo + (x_hi - x_lo) * k / kProfileSamples;
    basis[k] = std::sinh(lambda0 * (x + d));
  }
  double num = 0.0, den = 0.0;
  fit.profile_error = 0.0;
  std::vector<double> prof(kProfileSamples + 1);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& s = traj.states[i];
    const double scale = std::exp(-lambda0 * lambda0 * s.time);
    double pb = 0.0, bb = 0.0;
    for (int k = 0; k <= kProfileSamples; ++k) {
      const double x = x_lo + (x_hi - x_lo) * k / kProfileSamples;
      prof[k] = scale * graph_at(s.curve.nodes(), x);
      const double w = trapezoid_weight(k, kProfileSamples);
      pb += w * prof[k] * basis[k];
      bb += w * basis[k] * basis[k];
    }
    num += pb;
    den += bb;
    const double a_state = pb / bb;
    double err = 0.0;
    for (int k = 0; k <= kProfileSamples; ++k) {
      const double r = prof[k] - a_state * basis[k];
      err += trapezoid_weight(k, kProfileSamples) * r * r;
    }
    fit.profile_error = std::max(fit.profile_error, std::sqrt(err / (a_state * a_state * bb)));
  }
  fit.A = num / den;
  return fit;
}

BlowupSequence extract_blowup(const Trajectory& traj, std::size_t count) {
  if (traj.outcome != Outcome::Extinct) {
    throw NotExtinct("extract_blowup: trajectory ended as " + to_string(traj.outcome));
  }
  if (count < 3) throw DomainError("extract_blowup: count must be at least 3");
  std::vector<std::size_t> picks;
  for (std::size_t i = traj.states.size(); i-- > 0 && picks.size() < count;) {
    const double k = traj.states[i].diagnostics.kappa_max;
    if (picks.empty() || k <= 0.5 * traj.states[picks.back()].diagnostics.kappa_max) picks.push_back(i);
  }
  if (picks.size() < 3) {
    throw InsufficientWindow("extract_blowup: fewer than three states with doubling curvature");
  }
  std::reverse(picks.begin(), picks.end());

  BlowupSequence seq;
  seq.extinction_time = traj.extinction_time;
  for (std::size_t i : picks) {
    const auto& s = traj.states[i];
    const auto prof = curvature_profile(s.curve);
    std::size_t arg = 0;
    for (std::size_t j = 1; j < prof.size(); ++j) {
      if (prof[j].kappa > prof[arg].kappa) arg = j;
    }
    const double lam = prof[arg].kappa;
    const Point p = s.curve.node(arg);
    std::vector<Point> q(s.curve.size());
    for (std::size_t j = 0; j < q.size(); ++j) q[j] = lam * (s.curve.node(j) - p);
    seq.times.push_back(s.time);
    seq.scales.push_back(lam);
    seq.basepoints.push_back(p);
    seq.basepoint_indices.push_back(arg);
    seq.rescaled_curves.emplace_back(std::move(q));
  }
  return seq;
}

std::vector<Point> grim_reaper_frame(const Curve& rescaled, std::size_t tip_index) {
  const auto prof = curvature_profile(rescaled);
  const std::size_t n = rescaled.intervals();
  // Follow the longer side from the tip so the half Grim Reaper is covered.
  const bool forward = (prof[n].arclength - prof[tip_index].arclength) >= prof[tip_index].arclength;
  const double th = prof[tip_index].theta + (forward ? 0.0 : kPi);
  const double c = std::cos(th), s = std::sin(th);
  const Point tip = rescaled.node(tip_index);
  std::vector<Point> out;
  out.reserve(n + 1);
  auto push = [&](std::size_t j) {
    const Point v = rescaled.node(j) - tip;
    out.push_back(Point{c * v.x + s * v.y, -s * v.x + c * v.y});
  };
  if (forward) {
    for (std::size_t j = tip_index; j <= n; ++j) push(j);
  } else {
    for (std::size_t j = tip_index + 1; j-- > 0;) push(j);
  }
  // The curve must bend towards +y.
  double bend = 0.0;
  for (const auto& p : out) bend += p.y;
  if (bend < 0.0) {
    for (auto& p : out) p.y = -p.y;
  }
  // Keep only the branch that leaves the tip with increasing abscissa; the
  // rest of the curve (returning to the Dirichlet point) is outside the
  // graph chart of the Grim Reaper.
  std::size_t keep = 1;
  while (keep < out.size() && out[keep].x > out[keep - 1].x) ++keep;
  out.resize(keep);
  return out;
}

GrimReaperReport compare_grim_reaper(const BlowupSequence& seq, double window_halfwidth) {
  if (seq.rescaled_curves.empty()) throw EmptySequence("compare_grim_reaper: empty blow-up sequence");
  if (!(window_halfwidth > 0.0 && window_halfwidth < 0.5 * kPi)) {
    throw DomainError("compare_grim_reaper: window must lie in (0, pi/2)");
  }
  GrimReaperReport rep;
  rep.window_halfwidth = window_halfwidth;
  for (std::size_t j = 0; j < seq.rescaled_curves.size(); ++j) {
    const auto frame = grim_reaper_frame(seq.rescaled_curves[j], seq.basepoint_indices[j]);
    double dev = 0.0;
    bool covered = false;
    for (const auto& p : frame) {
      if (p.x > window_halfwidth) break;
      dev = std::max(dev, std::abs(p.y + std::log(std::cos(p.x))));
      covered = covered || p.x >= 0.9 * window_halfwidth;
    }
    // A curve too short to reach across the window cannot match.
    if (!covered) dev = std::numeric_limits<double>::infinity();
    rep.deviations.push_back(dev);
    rep.type2_indicator.push_back((seq.extinction_time - seq.times[j]) * seq.scales[j] * seq.scales[j]);
  }
  rep.sup_deviation = rep.deviations.back();

  const auto frame = grim_reaper_frame(seq.rescaled_curves.back(), seq.basepoint_indices.back());
  const Curve framed(frame);
  const auto prof = curvature_profile(framed);
  rep.soliton_identity_error = 0.0;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (frame[i].x > 0.5) break;
    const double ratio = prof[i].kappa / std::cos(prof[i].theta);
    rep.soliton_identity_error = std::max(rep.soliton_identity_error, std::abs(ratio - 1.0));
  }
  return rep;
}

AreaBalanceReport area_balance(const Trajectory& traj) {
  AreaBalanceReport rep;
  const auto& st = traj.states;
  for (std::size_t i = 1; i + 1 < st.size(); ++i) {
    const double rate = central_derivative(st[i - 1].time, st[i - 1].diagnostics.area, st[i].time,
                                           st[i].diagnostics.area, st[i + 1].time, st[i + 1].diagnostics.area);
    const double rhs = -(st[i].diagnostics.theta_max - st[i].diagnostics.theta_min);
    rep.times.push_back(st[i].time);
    rep.area_rate.push_back(rate);
    rep.minus_turning.push_back(rhs);
    const double gap = std::abs(rate - rhs);
    if (gap > rep.max_discrepancy) {
      rep.max_discrepancy = gap;
      rep.worst_time = st[i].time;
    }
  }
  return rep;
}

}  // namespace dncsf
