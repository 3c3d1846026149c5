#pragma once

#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mechlab/domain.hpp"
#include "mechlab/measure.hpp"
#include "mechlab/mechanism.hpp"

namespace mechlab {

// Flat key = value experiment description.  Parsing rejects unknown keys,
// duplicate keys, out-of-range values, and keys that do not apply to the
// selected family / mechanism / measure.
struct ExperimentConfig {
  FamilyId family = FamilyId::quasilinear;
  double alpha = 0.0;  // quadratic_money only
  double interval_low = 0.01;
  double interval_high = 1.0;

  std::optional<std::string> mechanism;  // preset name; absent when unset
  double price = 0.0;                    // posted_price
  double intercept = 0.0;                // linear_raw
  double slope = 0.0;                    // linear_raw
  std::vector<std::tuple<double, double, double>> knots;  // piecewise param:t:q
  std::vector<std::pair<double, double>> menu;            // step t:q
  std::vector<double> thresholds;                         // step

  std::string measure = "uniform";
  double gamma = 0.0;                                 // power only
  std::vector<std::pair<double, double>> cdf_knots;   // piecewise_linear param:c

  std::vector<int> n_values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  int m_max = 1;
  int grid_size = 401;
  double sp_tol = 1e-9;
  double quad_tol = 1e-9;
  double step_tol = 1e-6;
  int restarts = 8;
  std::string out;  // empty: stdout

  // Keys present in the parsed source; not part of semantic equality.
  std::set<std::string> present;

  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);
};

// Both throw Error(Errc::config_error) with a message naming the offending key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Canonical echo; parse_config(dump_config(c)) == c.
std::string dump_config(const ExperimentConfig& config);

// Constructors for the configured objects; failures are reported as
// Error(Errc::config_error).
PreferenceFamily config_family(const ExperimentConfig& config);
PreferenceInterval config_interval(const ExperimentConfig& config);
ParamMeasure config_measure(const ExperimentConfig& config);
// Absent when no mechanism key was given.
std::optional<Mechanism> config_mechanism(const ExperimentConfig& config);

}  // namespace mechlab
