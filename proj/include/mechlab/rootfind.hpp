#pragma once

#include <cmath>
#include <utility>

namespace mechlab::rootfind {

inline constexpr int kMaxIterations = 200;

// Final bracket of a bisection run.  `feasible` always satisfies the
// predicate; `infeasible` does not (unless the predicate already held at the
// left end, in which case both equal that end).
struct Bracket {
  double infeasible;
  double feasible;
};

// Locates the smallest x in [lo, hi] with pred(x) true, assuming pred is
// false-then-true on the interval and pred(hi) holds.  Stops once the bracket
// is narrower than tol and returns it; callers that need a point should take
// the feasible end so the predicate is guaranteed to hold there.
template <typename Pred>
Bracket lower_boundary(Pred&& pred, double lo, double hi, double tol) {
  if (pred(lo)) return {lo, lo};
  double a = lo;
  double b = hi;
  for (int i = 0; i < kMaxIterations && (b - a) > tol; ++i) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    if (pred(mid)) {
      b = mid;
    } else {
      a = mid;
    }
  }
  return {a, b};
}

// Root of a monotone continuous f on [lo, hi] with f(lo) and f(hi) of
// opposite sign (either may be zero).  Returns the bracket midpoint once the
// bracket is narrower than tol.
template <typename F>
double bisect_root(F&& f, double lo, double hi, double tol) {
  double fa = f(lo);
  if (fa == 0.0) return lo;
  const double fb = f(hi);
  if (fb == 0.0) return hi;
  double a = lo;
  double b = hi;
  const bool a_negative = fa < 0.0;
  for (int i = 0; i < kMaxIterations && (b - a) > tol; ++i) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == a_negative) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace mechlab::rootfind
