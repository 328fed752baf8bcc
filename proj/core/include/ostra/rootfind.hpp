#pragma once

#include <cmath>
#include <stdexcept>

namespace ostra {

/// Bisection for a continuous non-decreasing f with f(lo) <= target <= f(hi).
/// Converges to interval width rel_tol relative to the root itself, so small
/// roots keep full relative precision.
template <class F>
double bisect_increasing(F&& f, double target, double lo, double hi,
                         double rel_tol = 1e-13, int max_iter = 260) {
  if (!(lo <= hi)) throw std::invalid_argument("bisect_increasing: empty bracket");
  if (f(lo) > target || f(hi) < target)
    throw std::invalid_argument("bisect_increasing: bracket does not contain target");
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= rel_tol * std::abs(mid)) return mid;
    if (mid == lo || mid == hi) return mid;  // interval exhausted in doubles
    if (f(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace ostra
