#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dncsf {

inline constexpr double kPi = std::numbers::pi;

/// Tolerance for on-circle and on-point constraints.
inline constexpr double kGeomEps = 1e-9;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend constexpr Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point, Point) = default;
};

constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
/// Counterclockwise rotation by a right angle.
constexpr Point perp(Point a) { return {-a.y, a.x}; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

// Error hierarchy. Every failure the library reports derives from Error so
// callers (the CLI in particular) can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidCurve : public Error {
 public:
  using Error::Error;
};

class ChartOverturn : public Error {
 public:
  using Error::Error;
};

class StepRejected : public Error {
 public:
  using Error::Error;
};

class ComparisonViolation : public Error {
 public:
  ComparisonViolation(const std::string& what, double time, double margin)
      : Error(what), time_(time), margin_(margin) {}
  double time() const { return time_; }
  double margin() const { return margin_; }

 private:
  double time_;
  double margin_;
};

class InsufficientWindow : public Error {
 public:
  using Error::Error;
};

class NotExtinct : public Error {
 public:
  using Error::Error;
};

class EmptySequence : public Error {
 public:
  using Error::Error;
};

}  // namespace dncsf
