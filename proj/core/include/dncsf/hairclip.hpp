#pragma once

// Parabolically rescaled hairclip timeslices
//     sin(lambda y) = exp(lambda^2 t) sinh(lambda (x + d)),  0 <= y <= pi/(2 lambda),
// the unique (lambda, t) whose slice meets the unit circle orthogonally at a
// prescribed point, and the limiting eigenvalue lambda0 solving
// tanh(lambda (1 + d)) = lambda.

#include <cstddef>
#include <optional>

#include "dncsf/geometry.hpp"

namespace dncsf {

struct HairclipSlice {
  double lambda = 1.0;
  double t = 0.0;
  double d = 1.0;

  /// exp(lambda^2 t) sinh(lambda (x + d)); the slice exists above x while
  /// this stays <= 1.
  double arcsin_argument(double x) const;
};

/// y on the slice above x. Throws DomainError for x < -d or when the slice
/// has no point above x.
double slice_height(const HairclipSlice& s, double x);

/// dy/dx on the slice.
double slice_slope(const HairclipSlice& s, double x);

/// g(lambda, theta) = tanh(lambda (cos theta + d)) cot(lambda sin theta) tan theta - 1.
/// Strictly decreasing in lambda on (0, pi / (2 sin theta)); its root selects
/// the orthogonal slice.
double pairing_function_g(double lambda, double theta, double d);

struct OrthogonalPair {
  double lambda = 0.0;
  double t = 0.0;
  /// |slice height at cos(theta) - sin(theta)|.
  double contact_residual = 0.0;
  /// Angle between the slice tangent at the contact point and the radius.
  double radial_residual = 0.0;

  HairclipSlice slice(double d) const { return {lambda, t, d}; }
};

/// The unique slice meeting the unit circle orthogonally at
/// (cos theta, sin theta), theta in (0, pi/2).
OrthogonalPair solve_orthogonal_pair(double theta, double d);

struct Eigenvalue {
  double lambda0 = 0.0;
  double d = 0.0;
  double residual() const;
};

/// Positive root of tanh(lambda (1 + d)) = lambda by bisection on (1e-6, 1).
Eigenvalue lambda0(double d);

/// Abscissa where the slice leaves the unit disc.
double slice_exit_x(const HairclipSlice& s);

/// The slice between o = (-d, 0) and its exit from the disc (or the
/// supplied exit abscissa), sampled at N + 1 arclength-uniform nodes. The
/// nodes lie on the slice to quadrature accuracy.
Curve slice_curve(const HairclipSlice& s, std::size_t n, std::optional<double> x_exit = std::nullopt);

/// Initial data for the old-but-not-ancient flows: the orthogonal slice
/// through (cos rho, sin rho), with that point as its exact last node.
Curve initial_curve(double rho, double d, std::size_t n);

}  // namespace dncsf
