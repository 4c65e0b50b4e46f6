#pragma once

#include <cmath>

namespace dncsf {

/// Bisection for a sign change of f on [lo, hi]. `f_lo_positive` states the
/// sign of f at lo, so the endpoints themselves are never evaluated (several
/// callers have singular limits there). Stops once the bracket is below
/// `xtol` or no longer shrinks in floating point.
template <class F>
double bisect(F&& f, double lo, double hi, bool f_lo_positive, double xtol = 0.0) {
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || hi - lo <= xtol) break;
    const double v = f(mid);
    if ((v > 0.0) == f_lo_positive) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace dncsf
