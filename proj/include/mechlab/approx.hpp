#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mechlab/measure.hpp"
#include "mechlab/mechanism.hpp"

namespace mechlab {

// One constancy cell of a dyadic step approximation.
struct SimpleCell {
  double level = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool lower_closed = true;
  bool upper_closed = false;

  bool contains(double param) const {
    if (param < lower || param > upper) return false;
    if (param == lower && !lower_closed) return false;
    if (param == upper && !upper_closed) return false;
    return true;
  }
};

// Dyadic lower step approximation of a monotone payment rule: levels k/2^n
// capped at n, one cell per attained level; cells partition the interval.
class SimpleFunction {
 public:
  SimpleFunction(int n, std::vector<SimpleCell> cells, PreferenceInterval interval);

  int resolution() const { return n_; }
  const std::vector<SimpleCell>& cells() const { return cells_; }
  const PreferenceInterval& interval() const { return interval_; }

 private:
  int n_;
  std::vector<SimpleCell> cells_;
  PreferenceInterval interval_;
};

// Largest dyadic level k/2^n at or below t, capped at n.  The pointwise
// definition the cell construction must reproduce.
double dyadic_level(double t, int n);

// Builds the dyadic approximation of F's payment rule on `interval`.
// Requires F monotone (checked on a 401 grid); cell boundaries are located by
// bisection to `solver_tol` and snapped to declared payment breakpoints,
// which decides the open/closed side of each boundary.
SimpleFunction simple_function(const Mechanism& f, int n,
                               const PreferenceInterval& interval,
                               double solver_tol = 1e-12);

double eval_simple(const SimpleFunction& s, double param);
double eval_simple(const SimpleFunction& s, const Preference& r);

// Exact expectation of the step function under the measure.
double expected_value(const SimpleFunction& s, const ParamMeasure& measure);

// The finite-range mechanism dominating the simple function: menu items are F
// at the interior cell boundaries plus F at the top of the interval, bottom
// pinned to (0, 0); thresholds are the indifference points between
// consecutive menu items.  Verifies F's strategy-proofness and individual
// rationality on a 401 grid first.
StepMechanism build_finite_mechanism(const Mechanism& f, const SimpleFunction& s);

struct ConvergenceRow {
  int n = 0;
  double e_simple = 0.0;
  double e_finite = 0.0;
  double e_full = 0.0;
  double gap = 0.0;  // e_full - e_finite
  int menu_size = 0;
};

// One row per requested resolution, on the measure's interval.
std::vector<ConvergenceRow> convergence_run(const Mechanism& f,
                                            const ParamMeasure& measure,
                                            std::span<const int> n_values,
                                            double quad_tol = 1e-9,
                                            double solver_tol = 1e-12);

namespace detail {

// Cell construction over a raw payment rule; `breakpoints` lists the
// parameters where the rule may jump.  Exposed for tests that exercise
// payment rules outside the mechanism catalog.
SimpleFunction approximate_payment(const std::function<double(double)>& payment,
                                   std::span<const double> breakpoints, int n,
                                   const PreferenceInterval& interval,
                                   double solver_tol);

}  // namespace detail

}  // namespace mechlab
