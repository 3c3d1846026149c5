#include "mechlab/domain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mechlab/rootfind.hpp"

namespace mechlab {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

Bundle::Bundle(double transfer_, double prob_) : transfer(transfer_), prob(prob_) {
  require(finite(transfer) && transfer >= 0.0, "bundle transfer must be finite and >= 0");
  require(finite(prob) && prob >= 0.0 && prob <= 1.0, "bundle prob must lie in [0, 1]");
}

bool diagonal(const Bundle& b1, const Bundle& b2) {
  return b1.transfer < b2.transfer && b1.prob < b2.prob;
}

PreferenceFamily PreferenceFamily::quasilinear() {
  return PreferenceFamily{FamilyId::quasilinear, 0.0};
}

PreferenceFamily PreferenceFamily::quadratic_money(double alpha) {
  require(finite(alpha) && alpha >= 0.0, "quadratic_money alpha must be finite and >= 0");
  return PreferenceFamily{FamilyId::quadratic_money, alpha};
}

Preference::Preference(PreferenceFamily family_, double param_)
    : family(family_), param(param_) {
  require(finite(param) && param > 0.0, "preference parameter must be finite and > 0");
}

PreferenceInterval::PreferenceInterval(PreferenceFamily family_, double low_, double high_)
    : family(family_), low(low_), high(high_) {
  require(finite(low) && finite(high), "interval bounds must be finite");
  require(low >= 0.0 && low < high, "interval requires 0 <= low < high");
}

double money_cost(const PreferenceFamily& family, double t) {
  if (family.id == FamilyId::quadratic_money) return t + family.alpha * t * t;
  return t;
}

double utility(const PreferenceFamily& family, double theta, const Bundle& z) {
  return theta * z.prob - money_cost(family, z.transfer);
}

double utility(const Preference& r, const Bundle& z) {
  return utility(r.family, r.param, z);
}

Ordering compare(const Preference& r, const Bundle& z1, const Bundle& z2, double tol) {
  const double u1 = utility(r, z1);
  const double u2 = utility(r, z2);
  if (std::abs(u1 - u2) <= tol) return Ordering::indifferent;
  return u1 > u2 ? Ordering::first_preferred : Ordering::second_preferred;
}

namespace {

// Inverse of money_cost on t >= 0.
double invert_money_cost(const PreferenceFamily& family, double m) {
  if (family.id == FamilyId::quasilinear || family.alpha == 0.0) return m;
  if (m == 0.0) return 0.0;
  // Root of t + alpha*t^2 = m lies in (0, m] since the cost dominates t.
  return rootfind::bisect_root(
      [&](double t) { return money_cost(family, t) - m; }, 0.0, m, 1e-14);
}

}  // namespace

double indiff_transfer(const Preference& r, const Bundle& z, double q_target) {
  require(finite(q_target) && q_target >= 0.0 && q_target <= 1.0,
          "q_target must lie in [0, 1]");
  // theta*q_target - money_cost(t*) = u(z), so the required money cost is:
  const double m = r.param * q_target - utility(r, z);
  if (m < 0.0) {
    raise(Errc::no_solution,
          "indifference curve requires a negative transfer at the target probability");
  }
  return invert_money_cost(r.family, m);
}

std::optional<double> indiff_prob(const Preference& r, const Bundle& z, double t) {
  require(finite(t) && t >= 0.0, "transfer must be finite and >= 0");
  const double q = (utility(r, z) + money_cost(r.family, t)) / r.param;
  if (q < 0.0 || q > 1.0) return std::nullopt;
  return q;
}

Preference solve_indifferent_preference(const PreferenceFamily& family,
                                        const Bundle& x1, const Bundle& x2,
                                        const PreferenceInterval& interval) {
  require(family == interval.family, "family must match the interval family");
  if (!diagonal(x1, x2)) {
    raise(Errc::not_diagonal, "bundles must strictly increase in both coordinates");
  }
  // d(theta) = u(theta, x2) - u(theta, x1) is strictly increasing in theta
  // with a single root at the indifferent type.
  const auto d = [&](double theta) {
    return utility(family, theta, x2) - utility(family, theta, x1);
  };
  double theta;
  if (family.id == FamilyId::quasilinear) {
    theta = (x2.transfer - x1.transfer) / (x2.prob - x1.prob);
  } else {
    const double d_low = d(interval.low);
    const double d_high = d(interval.high);
    if (d_low > 0.0 || d_high < 0.0) {
      raise(Errc::out_of_interval, "indifferent type lies outside the interval");
    }
    theta = rootfind::bisect_root(d, interval.low, interval.high, 1e-13);
  }
  if (!interval.contains(theta)) {
    raise(Errc::out_of_interval, "indifferent type lies outside the interval");
  }
  return Preference(family, theta);
}

bool cuts_from_above(const Preference& r1, const Preference& r2,
                     const Bundle& z, int probe_count) {
  require(r1.family == r2.family, "preferences must belong to one family");
  require(probe_count > 0, "probe_count must be positive");
  if (z.transfer <= 0.0 || z.prob <= 0.0) {
    raise(Errc::degenerate_corner, "cut order is probed strictly inside the quadrant");
  }
  constexpr double kTol = 1e-12;
  const auto slice = [&](const Preference& r, double q) -> std::optional<double> {
    // Largest transfer at level q still weakly preferred to z; empty slice
    // when even t = 0 falls below the curve.
    const double m = r.param * q - utility(r, z);
    if (m < 0.0) return std::nullopt;
    return invert_money_cost(r.family, m);
  };
  bool strict = false;
  for (int k = 1; k <= probe_count; ++k) {
    const double q = z.prob * static_cast<double>(k) / (probe_count + 1);
    const auto t1 = slice(r1, q);
    const auto t2 = slice(r2, q);
    if (!t2) {
      // Empty slice is contained in anything; strict when the other side has
      // a nonempty slice.
      if (t1) strict = true;
      continue;
    }
    if (!t1) return false;
    if (*t2 > *t1 + kTol) return false;
    if (*t2 < *t1 - kTol) strict = true;
  }
  return strict;
}

}  // namespace mechlab
