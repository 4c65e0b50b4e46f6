#pragma once

// Discrete planar curves in the closed unit disc: nodes, differential
// invariants (curvature, turning angle, arclength), and the enclosed-area
// functional used throughout the flow and its diagnostics.

#include <cstddef>
#include <span>
#include <vector>

#include "dncsf/common.hpp"

namespace dncsf {

enum class ChartKind { ArclengthPolyline, GraphOverXAxis, GraphOverChord };

struct Chart {
  ChartKind kind = ChartKind::ArclengthPolyline;
  /// Direction of the chart abscissa; only meaningful for GraphOverChord.
  double angle = 0.0;

  static Chart arclength() { return {}; }
  static Chart x_axis() { return {ChartKind::GraphOverXAxis, 0.0}; }
  static Chart chord(double angle) { return {ChartKind::GraphOverChord, angle}; }
};

/// Smallest node count a Curve accepts (N + 1 nodes with N >= 8).
inline constexpr std::size_t kMinIntervals = 8;

/// Tangent angles must stay this far from the chart normal for a graph chart.
inline constexpr double kChartMargin = 10.0 * kPi / 180.0;

/// An ordered polyline whose first node is the pinned (Dirichlet) endpoint.
///
/// Construction checks the node count, finiteness and that consecutive
/// nodes are distinct. Embeddedness and the on-circle condition of the last
/// node are checked by the operations that need them, since rescaled
/// blow-up curves and synthetic test data legitimately leave the disc.
class Curve {
 public:
  explicit Curve(std::vector<Point> nodes, Chart chart = Chart::arclength());

  std::span<const Point> nodes() const { return nodes_; }
  const Point& node(std::size_t i) const { return nodes_[i]; }
  const Point& front() const { return nodes_.front(); }
  const Point& back() const { return nodes_.back(); }
  /// Number of intervals N (the curve has N + 1 nodes).
  std::size_t intervals() const { return nodes_.size() - 1; }
  std::size_t size() const { return nodes_.size(); }
  Point dirichlet_point() const { return nodes_.front(); }
  const Chart& chart() const { return chart_; }

  /// Moves the node vector out; the curve is left empty.
  std::vector<Point> release() && { return std::move(nodes_); }

 private:
  std::vector<Point> nodes_;
  Chart chart_;
};

struct ProfileSample {
  double arclength = 0.0;
  double kappa = 0.0;
  double theta = 0.0;
};

struct CurveDiagnostics {
  double theta_min = 0.0;
  double theta_max = 0.0;
  double kappa_max = 0.0;
  double area = 0.0;
  double height_max = 0.0;
  double length = 0.0;
};

/// Signed Menger curvature of the triple (a, b, c); positive for left turns.
double menger_curvature(Point a, Point b, Point c);

/// Curvature vector at b of the circle through (a, b, c), i.e. Menger
/// curvature times the unit normal pointing to the circumcentre. Zero for
/// collinear triples.
Point menger_curvature_vector(Point a, Point b, Point c);

/// Per-node arclength, curvature and unwrapped tangent angle. Interior
/// curvature is Menger curvature; interior angles bisect the adjacent chord
/// directions; endpoint values are quadratic one-sided extrapolations.
std::vector<ProfileSample> curvature_profile(const Curve& c);

/// Polyline length.
double length(const Curve& c);

/// Cumulative chord length at each node.
std::vector<double> cumulative_length(const Curve& c);

/// True if no two non-adjacent segments intersect.
bool is_embedded(const Curve& c);

/// Area of the region above the curve together with the segment from
/// (-1, 0) to (-d, 0), inside the disc. The closing contour runs along the
/// unit circle from the last node counterclockwise to (-1, 0).
/// Throws InvalidCurve for self-intersecting input.
double enclosed_area(const Curve& c, double d);

/// N + 1 nodes equally spaced along the linear interpolant of c; endpoints
/// kept bit-for-bit.
Curve resample_arclength(const Curve& c, std::size_t n);

/// Re-tags c with a graph chart after checking that every chord direction
/// stays at least kChartMargin away from the chart normal. Throws
/// ChartOverturn otherwise. Passing ArclengthPolyline just re-tags.
Curve to_graph(const Curve& c, Chart chart);

/// Scalar summary: extreme turning angles, largest curvature, enclosed
/// area (with d taken from the Dirichlet node), largest height, length.
CurveDiagnostics diagnose(const Curve& c);

/// Two-sided Hausdorff distance between the polyline and the segment [a, b].
double hausdorff_to_segment(const Curve& c, Point a, Point b);

}  // namespace dncsf
