#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mechlab/measure.hpp"
#include "mechlab/mechanism.hpp"

namespace mechlab {

// A finite menu parameterized by threshold types and allocations; payments
// are pinned by the indifference chain, which makes the induced step
// mechanism strategy-proof and individually rational by construction.
struct MenuDesign {
  PreferenceInterval interval;
  std::vector<double> thresholds;   // strictly increasing, in (low, high]
  std::vector<double> allocations;  // strictly increasing, in (0, 1]
  std::vector<double> payments;     // derived, strictly increasing

  int m() const { return static_cast<int>(thresholds.size()); }
};

// Derives the payments.  Throws std::invalid_argument on infeasible
// thresholds or allocations.
MenuDesign make_menu_design(const PreferenceInterval& interval,
                            std::vector<double> thresholds,
                            std::vector<double> allocations);

StepMechanism induced_step(const MenuDesign& d);

// Exact expected revenue of the induced step mechanism.
double revenue_of_menu(const MenuDesign& d, const ParamMeasure& measure);

struct MenuOptimum {
  MenuDesign design;
  double revenue = 0.0;
};

// Coordinate ascent over (thresholds, allocations) with the top allocation
// pinned to 1, from Latin-hypercube restarts plus deterministic coarse-grid
// starts.  `seed` only shuffles the restart points.  Ties break toward the
// lexicographically smallest design.
MenuOptimum optimize_menu(int m, const PreferenceFamily& family,
                          const PreferenceInterval& interval,
                          const ParamMeasure& measure, int restarts = 8,
                          double step_tol = 1e-6, std::uint64_t seed = 0);

enum class RevenueFlag { exceeded, tie, below };

const char* to_string(RevenueFlag flag);

struct RevenueRow {
  std::string source;
  double revenue = 0.0;
};

struct CorollaryReport {
  std::vector<RevenueRow> rows;  // "F", then finite-range candidates
  double e_full = 0.0;
  double best_finite = 0.0;
  RevenueFlag flag = RevenueFlag::below;
};

// Tabulates E[F] against the finite-range candidates: the constructed
// dominating mechanisms for n = 1..n_max and optimized menus for m = 1..m_max.
// The flag says whether the best finite-range revenue exceeds, ties (within
// 1e-6), or falls below E[F].
CorollaryReport corollary_report(const Mechanism& f, const ParamMeasure& measure,
                                 int m_max, int n_max, int restarts = 8,
                                 double step_tol = 1e-6, std::uint64_t seed = 0,
                                 double quad_tol = 1e-9);

}  // namespace mechlab
