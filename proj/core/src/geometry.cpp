#include "dncsf/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace dncsf {

namespace {

// Quadratic Lagrange extrapolation of (s_k, v_k) to s.
double extrapolate_quadratic(const std::array<double, 3>& s, const std::array<double, 3>& v,
                             double at) {
  double out = 0.0;
  for (int i = 0; i < 3; ++i) {
    double w = 1.0;
    for (int j = 0; j < 3; ++j) {
      if (j != i) w *= (at - s[j]) / (s[i] - s[j]);
    }
    out += w * v[i];
  }
  return out;
}

// Unwrapped chord angles, one per segment.
std::vector<double> chord_angles(std::span<const Point> p, double reference = 0.0) {
  std::vector<double> ang(p.size() - 1);
  double prev = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const Point e = p[i + 1] - p[i];
    double a = std::atan2(e.y, e.x) - reference;
    if (i == 0) {
      a = std::remainder(a, 2.0 * kPi);
    } else {
      a = prev + std::remainder(a - prev, 2.0 * kPi);
    }
    ang[i] = a;
    prev = a;
  }
  return ang;
}

bool segments_intersect(Point a, Point b, Point c, Point d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  auto on_segment = [](Point p, Point q, Point r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
           r.y <= std::max(p.y, q.y);
  };
  if (d1 == 0 && on_segment(a, b, c)) return true;
  if (d2 == 0 && on_segment(a, b, d)) return true;
  if (d3 == 0 && on_segment(c, d, a)) return true;
  if (d4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

double area_unchecked(std::span<const Point> p, double d) {
  double twice = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) twice += cross(p[i], p[i + 1]);
  const Point o{-d, 0.0};
  const Point west{-1.0, 0.0};
  // Circle arc from the last node to (-1, 0): the shoelace integrand on the
  // unit circle is exactly the swept angle.
  const Point end = p.back();
  double phi = std::atan2(end.y, end.x);
  if (phi < 0.0 && phi > -1e-12) phi = 0.0;
  twice += kPi - phi;
  twice += cross(west, o);
  twice += cross(o, p.front());
  return 0.5 * twice;
}

double point_segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + t * ab);
}

}  // namespace

Curve::Curve(std::vector<Point> nodes, Chart chart) : nodes_(std::move(nodes)), chart_(chart) {
  if (nodes_.size() < kMinIntervals + 1) {
    throw InvalidCurve("curve needs at least " + std::to_string(kMinIntervals + 1) + " nodes, got " +
                       std::to_string(nodes_.size()));
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!std::isfinite(nodes_[i].x) || !std::isfinite(nodes_[i].y)) {
      throw InvalidCurve("non-finite node " + std::to_string(i));
    }
    if (i > 0 && nodes_[i] == nodes_[i - 1]) {
      throw InvalidCurve("coincident consecutive nodes at " + std::to_string(i));
    }
  }
}

double menger_curvature(Point a, Point b, Point c) {
  const Point u = b - a;
  const Point v = c - b;
  const Point w = c - a;
  const double denom = norm(u) * norm(v) * norm(w);
  if (denom == 0.0) throw InvalidCurve("coincident nodes in curvature triple");
  return 2.0 * cross(u, v) / denom;
}

Point menger_curvature_vector(Point a, Point b, Point c) {
  const Point u = b - a;
  const Point v = c - b;
  const Point w = c - a;
  const double lw = norm(w);
  const double denom = norm(u) * norm(v) * lw * lw;
  if (denom == 0.0) throw InvalidCurve("coincident nodes in curvature triple");
  return (2.0 * cross(u, v) / denom) * perp(w);
}

std::vector<double> cumulative_length(const Curve& c) {
  const auto p = c.nodes();
  std::vector<double> s(p.size(), 0.0);
  for (std::size_t i = 1; i < p.size(); ++i) s[i] = s[i - 1] + distance(p[i], p[i - 1]);
  return s;
}

double length(const Curve& c) { return cumulative_length(c).back(); }

std::vector<ProfileSample> curvature_profile(const Curve& c) {
  const auto p = c.nodes();
  const std::size_t n = c.intervals();
  const auto s = cumulative_length(c);
  const auto ang = chord_angles(p);

  std::vector<ProfileSample> out(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out[i].arclength = s[i];
  for (std::size_t i = 1; i < n; ++i) {
    out[i].kappa = menger_curvature(p[i - 1], p[i], p[i + 1]);
    out[i].theta = 0.5 * (ang[i - 1] + ang[i]);
  }

  out[0].kappa = extrapolate_quadratic({s[1], s[2], s[3]}, {out[1].kappa, out[2].kappa, out[3].kappa}, s[0]);
  out[n].kappa = extrapolate_quadratic({s[n - 1], s[n - 2], s[n - 3]},
                                       {out[n - 1].kappa, out[n - 2].kappa, out[n - 3].kappa}, s[n]);

  auto mid = [&](std::size_t seg) { return 0.5 * (s[seg] + s[seg + 1]); };
  out[0].theta = extrapolate_quadratic({mid(0), mid(1), mid(2)}, {ang[0], ang[1], ang[2]}, s[0]);
  out[n].theta = extrapolate_quadratic({mid(n - 1), mid(n - 2), mid(n - 3)},
                                       {ang[n - 1], ang[n - 2], ang[n - 3]}, s[n]);
  return out;
}

bool is_embedded(const Curve& c) {
  const auto p = c.nodes();
  const std::size_t m = p.size() - 1;
  for (std::size_t i = 0; i < m; ++i) {
    const double xmin = std::min(p[i].x, p[i + 1].x), xmax = std::max(p[i].x, p[i + 1].x);
    const double ymin = std::min(p[i].y, p[i + 1].y), ymax = std::max(p[i].y, p[i + 1].y);
    for (std::size_t j = i + 2; j < m; ++j) {
      if (std::max(p[j].x, p[j + 1].x) < xmin || std::min(p[j].x, p[j + 1].x) > xmax ||
          std::max(p[j].y, p[j + 1].y) < ymin || std::min(p[j].y, p[j + 1].y) > ymax) {
        continue;
      }
      if (segments_intersect(p[i], p[i + 1], p[j], p[j + 1])) return false;
    }
  }
  // Adjacent segments may only share their common node: reject folds back
  // onto the previous segment.
  for (std::size_t i = 1; i < m; ++i) {
    const Point u = p[i] - p[i - 1];
    const Point v = p[i + 1] - p[i];
    if (cross(u, v) == 0.0 && dot(u, v) < 0.0) return false;
  }
  return true;
}

double enclosed_area(const Curve& c, double d) {
  if (!is_embedded(c)) throw InvalidCurve("enclosed_area: curve is not embedded");
  return area_unchecked(c.nodes(), d);
}

Curve resample_arclength(const Curve& c, std::size_t n) {
  if (n < kMinIntervals) throw DomainError("resample_arclength: N must be at least 8");
  if (!is_embedded(c)) throw InvalidCurve("resample_arclength: curve is not embedded");
  const auto p = c.nodes();
  const auto s = cumulative_length(c);
  const double total = s.back();

  std::vector<Point> out(n + 1);
  out.front() = p.front();
  out.back() = p.back();
  std::size_t seg = 0;
  for (std::size_t k = 1; k < n; ++k) {
    const double target = total * static_cast<double>(k) / static_cast<double>(n);
    while (seg + 2 < p.size() && s[seg + 1] < target) ++seg;
    const double span = s[seg + 1] - s[seg];
    const double t = span > 0.0 ? (target - s[seg]) / span : 0.0;
    out[k] = p[seg] + t * (p[seg + 1] - p[seg]);
  }
  return Curve(std::move(out), Chart::arclength());
}

Curve to_graph(const Curve& c, Chart chart) {
  if (chart.kind == ChartKind::ArclengthPolyline) {
    return Curve(std::vector<Point>(c.nodes().begin(), c.nodes().end()), chart);
  }
  const double reference = chart.kind == ChartKind::GraphOverXAxis ? 0.0 : chart.angle;
  const auto ang = chord_angles(c.nodes(), reference);
  const double limit = 0.5 * kPi - kChartMargin;
  for (std::size_t i = 0; i < ang.size(); ++i) {
    if (std::abs(ang[i]) >= limit) {
      throw ChartOverturn("to_graph: chord " + std::to_string(i) + " leaves the chart cone (angle " +
                          std::to_string(ang[i]) + " rad from the abscissa)");
    }
  }
  if (chart.kind == ChartKind::GraphOverXAxis) chart.angle = 0.0;
  return Curve(std::vector<Point>(c.nodes().begin(), c.nodes().end()), chart);
}

CurveDiagnostics diagnose(const Curve& c) {
  const auto prof = curvature_profile(c);
  CurveDiagnostics out;
  out.theta_min = std::numeric_limits<double>::infinity();
  out.theta_max = -std::numeric_limits<double>::infinity();
  out.kappa_max = -std::numeric_limits<double>::infinity();
  for (const auto& q : prof) {
    out.theta_min = std::min(out.theta_min, q.theta);
    out.theta_max = std::max(out.theta_max, q.theta);
    out.kappa_max = std::max(out.kappa_max, q.kappa);
  }
  out.height_max = -std::numeric_limits<double>::infinity();
  for (const auto& p : c.nodes()) out.height_max = std::max(out.height_max, p.y);
  out.length = prof.back().arclength;
  out.area = area_unchecked(c.nodes(), -c.dirichlet_point().x);
  return out;
}

double hausdorff_to_segment(const Curve& c, Point a, Point b) {
  const auto p = c.nodes();
  double h = 0.0;
  for (const auto& q : p) h = std::max(h, point_segment_distance(q, a, b));
  // Segment side: the farthest segment point from a polyline is attained at
  // a segment endpoint or where the segment meets a polyline bisector; a
  // dense sample is accurate to the sample spacing squared.
  constexpr int kSamples = 2048;
  for (int k = 0; k <= kSamples; ++k) {
    const Point q = a + (static_cast<double>(k) / kSamples) * (b - a);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      best = std::min(best, point_segment_distance(q, p[i], p[i + 1]));
    }
    h = std::max(h, best);
  }
  return h;
}

}  // namespace dncsf
