#include "dncsf/hairclip.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "dncsf/roots.hpp"

namespace dncsf {

namespace {

// 5-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 5> kGlNodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                            0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGlWeights = {0.2369268850561891, 0.4786286704993665,
                                              0.5688888888888889, 0.4786286704993665,
                                              0.2369268850561891};

double speed(const HairclipSlice& s, double x) {
  const double m = slice_slope(s, x);
  return std::sqrt(1.0 + m * m);
}

double arclength_between(const HairclipSlice& s, double x0, double x1) {
  const double half = 0.5 * (x1 - x0), mid = 0.5 * (x1 + x0);
  double acc = 0.0;
  for (std::size_t k = 0; k < kGlNodes.size(); ++k) acc += kGlWeights[k] * speed(s, mid + half * kGlNodes[k]);
  return half * acc;
}

void check_slice(const HairclipSlice& s) {
  if (!(s.lambda > 0.0) || !std::isfinite(s.t)) throw DomainError("hairclip slice needs lambda > 0 and finite t");
  if (!(s.d > 0.0 && s.d <= 1.0)) throw DomainError("hairclip slice needs d in (0, 1]");
}

}  // namespace

double HairclipSlice::arcsin_argument(double x) const {
  return std::exp(lambda * lambda * t) * std::sinh(lambda * (x + d));
}

double slice_height(const HairclipSlice& s, double x) {
  check_slice(s);
  if (x < -s.d) throw DomainError("slice_height: x below the Dirichlet point");
  const double arg = s.arcsin_argument(x);
  if (arg > 1.0) {
    throw DomainError("slice_height: slice has no point above x = " + std::to_string(x) + " (arcsin argument " +
                      std::to_string(arg) + ")");
  }
  return std::asin(arg) / s.lambda;
}

double slice_slope(const HairclipSlice& s, double x) {
  const double y = slice_height(s, x);
  return std::exp(s.lambda * s.lambda * s.t) * std::cosh(s.lambda * (x + s.d)) / std::cos(s.lambda * y);
}

double pairing_function_g(double lambda, double theta, double d) {
  if (!(theta > 0.0 && theta < 0.5 * kPi)) throw DomainError("pairing_function_g: theta must lie in (0, pi/2)");
  const double st = std::sin(theta);
  if (!(lambda > 0.0 && lambda * st < 0.5 * kPi)) {
    throw DomainError("pairing_function_g: lambda must lie in (0, pi / (2 sin theta))");
  }
  return std::tanh(lambda * (std::cos(theta) + d)) / std::tan(lambda * st) * std::tan(theta) - 1.0;
}

OrthogonalPair solve_orthogonal_pair(double theta, double d) {
  if (!(theta > 0.0 && theta < 0.5 * kPi)) throw DomainError("solve_orthogonal_pair: theta must lie in (0, pi/2)");
  if (!(d > 0.0 && d <= 1.0)) throw DomainError("solve_orthogonal_pair: d must lie in (0, 1]");
  const double st = std::sin(theta), ct = std::cos(theta);
  const double upper = 0.5 * kPi / st;
  // g -> d sec(theta) > 0 as lambda -> 0 and g -> -1 at the upper end.
  OrthogonalPair out;
  out.lambda = bisect([&](double l) { return pairing_function_g(l, theta, d); }, 0.0, upper,
                      /*f_lo_positive=*/true, 1e-15);
  const double l = out.lambda;
  out.t = std::log(std::sin(l * st) / std::sinh(l * (ct + d))) / (l * l);

  const HairclipSlice s{out.lambda, out.t, d};
  out.contact_residual = std::abs(std::asin(std::min(1.0, s.arcsin_argument(ct))) / l - st);
  // Tangent of the level set sin(l y) - exp(l^2 t) sinh(l (x + d)) = 0 is
  // orthogonal to its gradient; the slice is radial iff the gradient is
  // orthogonal to the contact point.
  const Point grad{-l * std::exp(l * l * out.t) * std::cosh(l * (ct + d)), l * std::cos(l * st)};
  out.radial_residual = std::abs(std::asin(dot(grad, Point{ct, st}) / norm(grad)));
  if (out.contact_residual > 1e-10 || out.radial_residual > 1e-8) {
    throw Error("solve_orthogonal_pair: postcondition failed (contact " + std::to_string(out.contact_residual) +
                ", radial " + std::to_string(out.radial_residual) + ")");
  }
  return out;
}

double Eigenvalue::residual() const { return std::abs(std::tanh(lambda0 * (1.0 + d)) - lambda0); }

Eigenvalue lambda0(double d) {
  if (!(d > 0.0 && d <= 1.0)) throw DomainError("lambda0: d must lie in (0, 1]");
  const double root =
      bisect([d](double l) { return std::tanh(l * (1.0 + d)) - l; }, 1e-6, 1.0, /*f_lo_positive=*/true, 0.0);
  return {root, d};
}

double slice_exit_x(const HairclipSlice& s) {
  check_slice(s);
  // Largest abscissa on the slice inside the strip x <= 1.
  double hi = 1.0;
  if (s.arcsin_argument(1.0) > 1.0) {
    hi = bisect([&](double x) { return 1.0 - s.arcsin_argument(x); }, -s.d, 1.0, true, 0.0);
  }
  auto outside = [&](double x) {
    const double y = std::asin(std::min(1.0, s.arcsin_argument(x))) / s.lambda;
    return x * x + y * y - 1.0;
  };
  if (!(outside(hi) > 0.0)) throw DomainError("slice_exit_x: slice stays inside the disc");
  return bisect(outside, -s.d, hi, /*f_lo_positive=*/false, 0.0);
}

Curve slice_curve(const HairclipSlice& s, std::size_t n, std::optional<double> x_exit) {
  check_slice(s);
  if (n < kMinIntervals) throw DomainError("slice_curve: N must be at least 8");
  const double x0 = -s.d;
  const double x1 = x_exit ? *x_exit : slice_exit_x(s);
  if (!(x1 > x0)) throw DomainError("slice_curve: empty slice");

  constexpr std::size_t kCells = 4096;
  std::vector<double> xs(kCells + 1), cum(kCells + 1, 0.0);
  for (std::size_t j = 0; j <= kCells; ++j) xs[j] = x0 + (x1 - x0) * static_cast<double>(j) / kCells;
  xs.back() = x1;
  for (std::size_t j = 0; j < kCells; ++j) cum[j + 1] = cum[j] + arclength_between(s, xs[j], xs[j + 1]);
  const double total = cum.back();

  std::vector<Point> pts(n + 1);
  pts.front() = Point{x0, 0.0};
  pts.back() = Point{x1, slice_height(s, x1)};
  std::size_t j = 0;
  for (std::size_t k = 1; k < n; ++k) {
    const double target = total * static_cast<double>(k) / static_cast<double>(n);
    while (j + 1 < kCells && cum[j + 1] < target) ++j;
    double x = xs[j] + (target - cum[j]) / speed(s, xs[j]);
    x = std::clamp(x, xs[j], xs[j + 1]);
    for (int it = 0; it < 20; ++it) {
      const double f = cum[j] + arclength_between(s, xs[j], x) - target;
      const double step = f / speed(s, x);
      x = std::clamp(x - step, xs[j], xs[j + 1]);
      if (std::abs(step) < 1e-16) break;
    }
    pts[k] = Point{x, slice_height(s, x)};
  }
  return Curve(std::move(pts));
}

Curve initial_curve(double rho, double d, std::size_t n) {
  if (!(rho > 0.0 && rho < 0.5 * kPi)) throw DomainError("initial_curve: rho must lie in (0, pi/2)");
  const OrthogonalPair pair = solve_orthogonal_pair(rho, d);
  Curve c = slice_curve(pair.slice(d), n, std::cos(rho));
  auto nodes = std::move(c).release();
  nodes.back() = Point{std::cos(rho), std::sin(rho)};
  return Curve(std::move(nodes));
}

}  // namespace dncsf
