#pragma once

#include <optional>

#include "mechlab/errors.hpp"

namespace mechlab {

// A lottery over one indivisible object paired with a money payment.
// transfer >= 0, prob in [0, 1].
struct Bundle {
  double transfer = 0.0;
  double prob = 0.0;

  Bundle() = default;
  Bundle(double transfer, double prob);

  friend bool operator==(const Bundle&, const Bundle&) = default;
};

// b2 strictly dominates b1 in both coordinates.  Such a pair admits an
// indifferent type in every family below.
bool diagonal(const Bundle& b1, const Bundle& b2);

enum class FamilyId {
  quasilinear,      // theta*q - t
  quadratic_money,  // theta*q - t - alpha*t^2
};

struct PreferenceFamily {
  FamilyId id = FamilyId::quasilinear;
  double alpha = 0.0;  // curvature of the money cost, quadratic_money only

  static PreferenceFamily quasilinear();
  static PreferenceFamily quadratic_money(double alpha);

  friend bool operator==(const PreferenceFamily&, const PreferenceFamily&) = default;
};

// One member of a family, identified by its type parameter theta > 0.
struct Preference {
  PreferenceFamily family;
  double param;

  Preference(PreferenceFamily family, double param);
};

// Closed parameter interval [low, high] within one family, 0 <= low < high.
struct PreferenceInterval {
  PreferenceFamily family;
  double low;
  double high;

  PreferenceInterval(PreferenceFamily family, double low, double high);

  double span() const { return high - low; }
  bool contains(double param) const { return param >= low && param <= high; }
};

// Utility index representing the ordinal ranking: strictly decreasing in the
// transfer, strictly increasing in the probability for theta > 0.
double utility(const PreferenceFamily& family, double theta, const Bundle& z);
double utility(const Preference& r, const Bundle& z);

// Money cost of a transfer: t for quasilinear, t + alpha*t^2 otherwise.
// Strictly increasing on t >= 0.
double money_cost(const PreferenceFamily& family, double t);

enum class Ordering {
  first_preferred,
  second_preferred,
  indifferent,
};

Ordering compare(const Preference& r, const Bundle& z1, const Bundle& z2,
                 double tol = 1e-12);

// Transfer t* >= 0 such that (t*, q_target) is indifferent to z under r.
// Throws Errc::no_solution when the indifference curve through z requires a
// negative transfer at q_target.
double indiff_transfer(const Preference& r, const Bundle& z, double q_target);

// Probability coordinate of the indifference curve through z at transfer t,
// or nullopt when it leaves [0, 1].
std::optional<double> indiff_prob(const Preference& r, const Bundle& z, double t);

// The family member indifferent between the diagonal pair x1, x2, restricted
// to `interval`.  Throws Errc::not_diagonal or Errc::out_of_interval.
Preference solve_indifferent_preference(const PreferenceFamily& family,
                                        const Bundle& x1, const Bundle& x2,
                                        const PreferenceInterval& interval);

// Whether r2 cuts r1 from above at z: inside the quadrant south-west of z the
// indifference curve of r2 through z lies weakly below the one of r1 in the
// transfer direction everywhere and strictly below somewhere.  Probed at
// `probe_count` equally spaced probability levels strictly below z.prob.
// Throws Errc::degenerate_corner when z has a zero coordinate.
bool cuts_from_above(const Preference& r1, const Preference& r2,
                     const Bundle& z, int probe_count = 100);

}  // namespace mechlab
