#include "dncsf/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dncsf/roots.hpp"

namespace dncsf {

ProblemConfig::ProblemConfig(double d) : d_(d) {
  if (!(d > 0.0 && d <= 1.0)) throw DomainError("d must lie in (0, 1], got " + std::to_string(d));
  a_ = 0.5 * (1.0 / d + d);
  b_ = 0.5 * (1.0 / d - d);
}

double ProblemConfig::omega() const {
  return d_ < 1.0 ? std::numeric_limits<double>::infinity() : std::log(2.0);
}

std::string to_string(ArcKind kind) {
  return kind == ArcKind::DirichletNeumann ? "DirichletNeumann" : "NeumannNeumann";
}

double ArcBarrier::start_angle() const {
  const Point v = start - center;
  return std::atan2(v.y, v.x);
}

double ArcBarrier::end_angle() const { return start_angle() + sweep; }

Point ArcBarrier::at(double phi) const {
  return center + radius * Point{std::cos(phi), std::sin(phi)};
}

Point ArcBarrier::at_offset(double delta) const {
  const double mid = start_angle() + 0.5 * delta;
  return start + 2.0 * radius * std::sin(0.5 * delta) * Point{-std::sin(mid), std::cos(mid)};
}

Curve ArcBarrier::sample(std::size_t n) const {
  std::vector<Point> pts(n + 1);
  pts.front() = start;
  pts.back() = end;
  for (std::size_t k = 1; k < n; ++k) {
    pts[k] = at_offset(sweep * static_cast<double>(k) / static_cast<double>(n));
  }
  return Curve(std::move(pts));
}

ArcBarrier dn_arc(const ProblemConfig& cfg, double theta) {
  if (!(theta > 0.0 && theta < kPi)) throw DomainError("dn_arc: theta must lie in (0, pi)");
  const double st = std::sin(theta), ct = std::cos(theta);
  const double r = (cfg.a() + ct) / st;
  const Point contact{ct, st};
  const Point center = contact + r * Point{-st, ct};
  // The arc turns counterclockwise from its tangent at o to the radial
  // tangent theta at the contact point.
  const Point to_o = cfg.o() - center;
  const double tangent_o = std::atan2(to_o.x, -to_o.y);
  double sweep = theta - tangent_o;
  while (sweep <= 0.0) sweep += 2.0 * kPi;
  while (sweep > 2.0 * kPi) sweep -= 2.0 * kPi;
  return ArcBarrier{ArcKind::DirichletNeumann, theta, center, r, cfg.o(), contact, sweep};
}

ArcBarrier nn_arc(double theta) {
  if (!(theta > 0.0 && theta < 0.5 * kPi)) throw DomainError("nn_arc: theta must lie in (0, pi/2)");
  const double st = std::sin(theta), ct = std::cos(theta);
  return ArcBarrier{ArcKind::NeumannNeumann, theta, Point{0.0, 1.0 / st}, ct / st, Point{-ct, st},
                    Point{ct, st}, 2.0 * theta};
}

double theta_plus(double t) {
  if (!(t <= 0.0)) throw DomainError("theta_plus: t must be <= 0");
  return std::asin(std::exp(2.0 * t));
}

double theta_minus(const ProblemConfig& cfg, double t) {
  if (!std::isfinite(t)) throw DomainError("theta_minus: t must be finite");
  if (!(t < cfg.omega())) throw DomainError("theta_minus: t must be below omega_d = log 2 when d = 1");
  const double a = cfg.a();
  // log of 2 sin^(1+a)(theta/2) cos^(1-a)(theta/2), increasing in theta.
  auto residual = [&](double th) {
    return std::log(2.0) + (1.0 + a) * std::log(std::sin(0.5 * th)) +
           (1.0 - a) * std::log(std::cos(0.5 * th)) - t;
  };
  return bisect(residual, 0.0, kPi, /*f_lo_positive=*/false);
}

double theta_minus_time(const ProblemConfig& cfg, double theta) {
  if (!(theta > 0.0 && theta < kPi)) throw DomainError("theta_minus_time: theta must lie in (0, pi)");
  const double a = cfg.a();
  return std::log(2.0) + (1.0 + a) * std::log(std::sin(0.5 * theta)) + (1.0 - a) * std::log(std::cos(0.5 * theta));
}

std::vector<double> dn_time_grid(const ProblemConfig& cfg, int n, double t_lo, double theta_hi) {
  if (n < 2) throw DomainError("dn_time_grid: need at least two times");
  const double th_lo = theta_minus(cfg, t_lo);
  if (!(theta_hi > th_lo && theta_hi < kPi)) throw DomainError("dn_time_grid: theta_hi must lie in (theta_minus(t_lo), pi)");
  std::vector<double> t(static_cast<std::size_t>(n));
  t.front() = t_lo;
  for (int k = 1; k < n; ++k) t[k] = theta_minus_time(cfg, th_lo + (theta_hi - th_lo) * k / (n - 1));
  return t;
}

double characteristic_rate(const ProblemConfig& cfg, double theta) {
  return std::sin(theta) / (cfg.a() + std::cos(theta));
}

double integrate_characteristic(const ProblemConfig& cfg, double theta0, double t0, double t1,
                                double max_step) {
  const double span = t1 - t0;
  if (span == 0.0) return theta0;
  const auto steps = static_cast<long>(std::ceil(std::abs(span) / max_step));
  const double h = span / static_cast<double>(steps);
  double th = theta0;
  for (long k = 0; k < steps; ++k) {
    const double k1 = characteristic_rate(cfg, th);
    const double k2 = characteristic_rate(cfg, th + 0.5 * h * k1);
    const double k3 = characteristic_rate(cfg, th + 0.5 * h * k2);
    const double k4 = characteristic_rate(cfg, th + h * k3);
    th += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
  }
  return th;
}

double dn_normal_speed(const ProblemConfig& cfg, double theta, Point p) {
  // (y / sin theta) * theta'(t) with theta' = sin theta / (a + cos theta).
  return p.y / std::sin(theta) * characteristic_rate(cfg, theta);
}

double nn_normal_speed(double theta, Point p) {
  // sin(theta) = exp(2t) gives theta' = 2 tan(theta).
  return p.y / std::sin(theta) * 2.0 * std::tan(theta);
}

BarrierReport verify_barrier_inequality(const ProblemConfig& cfg, ArcKind kind, double t, int samples) {
  if (samples < 16) throw DomainError("verify_barrier_inequality: need at least 16 samples");
  BarrierReport rep;
  rep.kind = kind;
  rep.d = cfg.d();
  rep.t = t;
  rep.samples = samples;
  const ArcBarrier arc =
      kind == ArcKind::DirichletNeumann ? dn_arc(cfg, theta_minus(cfg, t)) : nn_arc(theta_plus(t));
  rep.theta = arc.theta;
  const double kappa = 1.0 / arc.radius;

  rep.min_slack = std::numeric_limits<double>::infinity();
  rep.points.reserve(static_cast<std::size_t>(samples));
  rep.slacks.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    Point p;
    if (k == 0) {
      p = arc.start;
    } else if (k == samples - 1) {
      p = arc.end;
    } else {
      p = arc.at_offset(arc.sweep * k / static_cast<double>(samples - 1));
    }
    double slack;
    if (kind == ArcKind::DirichletNeumann) {
      slack = kappa - dn_normal_speed(cfg, arc.theta, p);
    } else {
      slack = nn_normal_speed(arc.theta, p) - kappa;
    }
    rep.points.push_back(p);
    rep.slacks.push_back(slack);
    if (slack < rep.min_slack) {
      rep.min_slack = slack;
      rep.argmin_point = p;
    }
  }
  if (rep.min_slack < -kBarrierSlackTol) {
    throw BarrierViolation(to_string(kind) + " barrier inequality violated at t = " + std::to_string(t) +
                               ", slack " + std::to_string(rep.min_slack),
                           rep);
  }
  return rep;
}

}  // namespace dncsf
