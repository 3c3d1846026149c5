#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "mechlab/domain.hpp"

namespace mechlab {

// Finite-range mechanism: a menu of bundles assigned by threshold types.
// menu[0] is the outside option (0, 0); consecutive menu items are strictly
// diagonal; assignment is left-closed, so a type equal to thresholds[i].param
// already receives menu[i + 1].
class StepMechanism {
 public:
  StepMechanism(std::vector<Bundle> menu, std::vector<Preference> thresholds,
                PreferenceInterval interval);

  const std::vector<Bundle>& menu() const { return menu_; }
  const std::vector<Preference>& thresholds() const { return thresholds_; }
  const PreferenceInterval& interval() const { return interval_; }

  Bundle at(double param) const;

 private:
  std::vector<Bundle> menu_;
  std::vector<Preference> thresholds_;
  PreferenceInterval interval_;
};

// A direct mechanism on a preference interval: one of the analytic catalog
// presets (quasilinear family only) or an explicit step mechanism.
class Mechanism {
 public:
  enum class Kind { analytic, step };
  enum class Preset { quadratic_sp, posted_price, linear_raw, piecewise, step };

  // t = theta^2 / 2, q = theta.  Requires high <= 1.
  static Mechanism quadratic_sp(const PreferenceInterval& interval);
  // Sell the object outright at `price`; types at or above the price buy.
  static Mechanism posted_price(double price, const PreferenceInterval& interval);
  // t = intercept + slope * theta, q = theta.  Generally not strategy-proof;
  // ships as a negative control for the verifiers.
  static Mechanism linear_raw(double intercept, double slope,
                              const PreferenceInterval& interval);
  // Piecewise-linear interpolation of (param, bundle) knots spanning the
  // interval end to end.
  static Mechanism piecewise(std::vector<std::pair<double, Bundle>> knots,
                             const PreferenceInterval& interval);
  static Mechanism step(StepMechanism mechanism);

  Kind kind() const;
  Preset preset() const { return preset_; }
  const PreferenceInterval& interval() const { return interval_; }
  // Present only when kind() == step.
  const StepMechanism* as_step() const;
  // Parameters where the bundle map may kink or jump: step thresholds or
  // interior piecewise knots.  Empty for smooth presets.
  std::vector<double> breakpoints() const;

  // Bundle at a raw parameter; callers keep the parameter inside the
  // interval.
  Bundle at(double param) const;
  double payment(double param) const { return at(param).transfer; }

  // Bundle for a preference; throws Errc::out_of_interval when the parameter
  // falls outside the mechanism's interval.
  Bundle evaluate(const Preference& r) const;

 private:
  struct Analytic {
    double a = 0.0;
    double b = 0.0;
    std::vector<std::pair<double, Bundle>> knots;
  };

  Mechanism(Preset preset, Analytic analytic, const PreferenceInterval& interval);
  explicit Mechanism(StepMechanism mechanism);

  Preset preset_;
  std::variant<Analytic, StepMechanism> impl_;
  PreferenceInterval interval_;
};

// One offending report found during verification: the reporter and, for
// pairwise checks, the profitable target report.
struct Witness {
  Preference reporter;
  std::optional<Preference> other;
  double gap = 0.0;
};

inline constexpr int kMaxWitnesses = 32;

struct VerificationReport {
  long violation_count = 0;
  double worst_violation = 0.0;
  std::vector<Witness> witnesses;  // capped at kMaxWitnesses

  bool clean() const { return violation_count == 0; }
};

// Evaluation grid: `grid_size` evenly spaced parameters, augmented with each
// step threshold and a +/- 1e-9 collar around it (clamped to the interval).
std::vector<double> verification_grid(const Mechanism& f,
                                      const PreferenceInterval& interval,
                                      int grid_size);

// No grid type gains more than tol by reporting as another grid type.
VerificationReport verify_sp(const Mechanism& f, const PreferenceInterval& interval,
                             int grid_size = 401, double tol = 1e-9);
// Every grid type weakly prefers its bundle to (0, 0), up to tol.
VerificationReport verify_ir(const Mechanism& f, const PreferenceInterval& interval,
                             int grid_size = 401, double tol = 1e-9);
// Bundles are weakly increasing in both coordinates along the grid
// (tolerance 1e-12).
VerificationReport verify_monotone(const Mechanism& f,
                                   const PreferenceInterval& interval,
                                   int grid_size = 401);

}  // namespace mechlab
