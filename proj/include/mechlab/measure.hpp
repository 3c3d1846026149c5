#pragma once

#include <utility>
#include <vector>

#include "mechlab/domain.hpp"

namespace mechlab {

// Non-atomic probability measure on a preference interval, held as a
// continuous strictly increasing CDF with cdf(low) = 0 and cdf(high) = 1.
class ParamMeasure {
 public:
  enum class Kind { uniform, power, piecewise_linear };

  static ParamMeasure uniform(const PreferenceInterval& interval);
  // cdf(theta) = ((theta - low) / span)^gamma, gamma > 0.
  static ParamMeasure power(double gamma, const PreferenceInterval& interval);
  // Interior knots (param, cdf), strictly increasing in both coordinates;
  // the endpoints (low, 0) and (high, 1) are implied.
  static ParamMeasure piecewise_linear(std::vector<std::pair<double, double>> knots,
                                       const PreferenceInterval& interval);

  Kind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  const PreferenceInterval& interval() const { return interval_; }
  // Full knot list including endpoints; empty unless piecewise_linear.
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

  double cdf(double param) const;
  // Right derivative of the CDF; bounded whenever kind != power or gamma >= 1.
  double density(double param) const;
  bool bounded_density() const;
  // Quantile: the unique param with cdf(param) = c, c in [0, 1].
  double quantile(double c) const;
  // Mass of the stretch between lower and upper; endpoint inclusion is
  // immaterial because the measure has no atoms.
  double mass(double lower, double upper) const;

 private:
  ParamMeasure(Kind kind, double gamma,
               std::vector<std::pair<double, double>> knots,
               const PreferenceInterval& interval);

  Kind kind_;
  double gamma_;
  std::vector<std::pair<double, double>> knots_;
  PreferenceInterval interval_;
};

class Mechanism;

// E[t_F] under the measure.  Step mechanisms are summed exactly; analytic
// payment rules are integrated by adaptive quadrature split at the payment
// breakpoints and the CDF knots.
double expected_revenue(const Mechanism& f, const ParamMeasure& measure,
                        double quad_tol = 1e-9);

}  // namespace mechlab
