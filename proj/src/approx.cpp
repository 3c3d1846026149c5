#include "mechlab/approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "mechlab/rootfind.hpp"

namespace mechlab {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

constexpr int kMaxResolution = 20;

bool cell_empty(const SimpleCell& c) {
  if (c.lower > c.upper) return true;
  if (c.lower == c.upper) return !(c.lower_closed && c.upper_closed);
  return false;
}

}  // namespace

SimpleFunction::SimpleFunction(int n, std::vector<SimpleCell> cells,
                               PreferenceInterval interval)
    : n_(n), cells_(std::move(cells)), interval_(interval) {
  require(n_ >= 1 && n_ <= kMaxResolution, "resolution n must lie in [1, 20]");
  require(!cells_.empty(), "simple function needs at least one cell");
  require(cells_.front().lower == interval_.low && cells_.front().lower_closed,
          "cells must start closed at the interval low end");
  require(cells_.back().upper == interval_.high && cells_.back().upper_closed,
          "cells must end closed at the interval high end");
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    require(!cell_empty(cells_[i]), "cells must be nonempty");
    require(cells_[i].level >= 0.0, "levels must be nonnegative");
    if (i > 0) {
      require(cells_[i - 1].level < cells_[i].level,
              "levels must be strictly increasing");
      require(cells_[i - 1].upper == cells_[i].lower &&
                  cells_[i - 1].upper_closed != cells_[i].lower_closed,
              "consecutive cells must share an endpoint with complementary closedness");
    }
  }
}

double dyadic_level(double t, int n) {
  require(n >= 1 && n <= kMaxResolution, "resolution n must lie in [1, 20]");
  require(t >= 0.0, "payment must be nonnegative");
  if (t >= static_cast<double>(n)) return static_cast<double>(n);
  const double scale = std::ldexp(1.0, n);
  return std::floor(t * scale) / scale;
}

namespace detail {

SimpleFunction approximate_payment(const std::function<double(double)>& payment,
                                   std::span<const double> breakpoints, int n,
                                   const PreferenceInterval& interval,
                                   double solver_tol) {
  require(n >= 1 && n <= kMaxResolution, "resolution n must lie in [1, 20]");
  require(solver_tol > 0.0, "solver_tol must be positive");
  std::vector<double> breaks(breakpoints.begin(), breakpoints.end());
  std::sort(breaks.begin(), breaks.end());

  const double t_high = payment(interval.high);
  const long max_k = static_cast<long>(n) << n;

  // One boundary per attained level: the infimum parameter whose payment
  // reaches the level, plus the side the level's cell starts on.
  struct Boundary {
    double level;
    double param;
    bool closed;
  };
  std::vector<Boundary> boundaries;
  double prev_param = interval.low;
  for (long k = 1; k <= max_k; ++k) {
    const double v = std::ldexp(static_cast<double>(k), -n);
    if (v > t_high) break;
    double param;
    bool closed = true;
    if (payment(interval.low) >= v) {
      param = interval.low;
    } else {
      const auto bracket = rootfind::lower_boundary(
          [&](double x) { return payment(x) >= v; }, interval.low,
          interval.high, solver_tol);
      param = bracket.feasible;
      // Snap to a declared breakpoint caught inside the final bracket: if the
      // payment already reaches v there the boundary is that point (closed);
      // if it reaches v only just beyond it, the rule jumps past v across the
      // breakpoint and the cell starts open (the discontinuous case).
      const auto lo = std::upper_bound(breaks.begin(), breaks.end(), bracket.infeasible);
      const auto hi = std::upper_bound(breaks.begin(), breaks.end(), bracket.feasible);
      bool snapped = false;
      for (auto it = lo; it != hi; ++it) {
        if (payment(*it) >= v) {
          param = *it;
          snapped = true;
          break;
        }
      }
      if (!snapped && lo != hi) {
        const double last = *(hi - 1);
        const double probe = last + (bracket.feasible - last) * 1e-3;
        if (probe > last && payment(probe) >= v) {
          param = last;
          closed = false;
        }
      }
    }
    // Monotonicity of the located boundaries is forced; jumps over several
    // levels produce repeated parameters whose intermediate cells are empty.
    param = std::max(param, prev_param);
    prev_param = param;
    boundaries.push_back({v, param, closed});
  }

  std::vector<SimpleCell> cells;
  double lower = interval.low;
  bool lower_closed = true;
  double level = 0.0;
  for (const auto& b : boundaries) {
    SimpleCell cell{level, lower, b.param, lower_closed, !b.closed};
    if (!cell_empty(cell)) cells.push_back(cell);
    level = b.level;
    lower = b.param;
    lower_closed = b.closed;
  }
  SimpleCell top{level, lower, interval.high, lower_closed, true};
  require(!cell_empty(top), "top cell must reach the interval high end");
  cells.push_back(top);
  return SimpleFunction(n, std::move(cells), interval);
}

}  // namespace detail

SimpleFunction simple_function(const Mechanism& f, int n,
                               const PreferenceInterval& interval,
                               double solver_tol) {
  const VerificationReport mono = verify_monotone(f, interval, 401);
  if (!mono.clean()) {
    raise(Errc::not_monotone, "payment rule must be monotone on the interval");
  }
  const std::vector<double> breaks = f.breakpoints();
  return detail::approximate_payment([&](double x) { return f.payment(x); },
                                     breaks, n, interval, solver_tol);
}

double eval_simple(const SimpleFunction& s, double param) {
  if (!s.interval().contains(param)) {
    raise(Errc::out_of_interval, "parameter outside the simple function interval");
  }
  const auto& cells = s.cells();
  // First cell not entirely left of param.
  const auto it = std::partition_point(
      cells.begin(), cells.end(), [param](const SimpleCell& c) {
        return c.upper < param || (c.upper == param && !c.upper_closed);
      });
  if (it != cells.end() && it->contains(param)) return it->level;
  throw std::logic_error("simple function cells failed to cover the parameter");
}

double eval_simple(const SimpleFunction& s, const Preference& r) {
  require(r.family == s.interval().family,
          "preference family must match the simple function family");
  return eval_simple(s, r.param);
}

double expected_value(const SimpleFunction& s, const ParamMeasure& measure) {
  const auto& iv = measure.interval();
  require(iv.family == s.interval().family && iv.low == s.interval().low &&
              iv.high == s.interval().high,
          "measure and simple function must share one interval");
  double total = 0.0;
  for (const auto& c : s.cells()) total += c.level * measure.mass(c.lower, c.upper);
  return total;
}

StepMechanism build_finite_mechanism(const Mechanism& f, const SimpleFunction& s) {
  const PreferenceInterval& iv = s.interval();
  const VerificationReport sp = verify_sp(f, iv, 401, 1e-9);
  const VerificationReport ir = verify_ir(f, iv, 401, 1e-9);
  if (!sp.clean() || !ir.clean()) {
    raise(Errc::not_strategy_proof,
          "input mechanism fails strategy-proofness or individual rationality");
  }

  // Menu items: the outside option, F at each interior cell boundary, F at
  // the top of the interval.  `origin` remembers the sampled parameter for
  // the threshold bracket assertion below.
  struct Item {
    Bundle bundle;
    double origin;
  };
  std::vector<Item> items{{Bundle(0.0, 0.0), iv.low}};
  const auto& cells = s.cells();
  auto append = [&](Bundle bundle, double origin) {
    Item& back = items.back();
    if (bundle.transfer < back.bundle.transfer - 1e-12 ||
        bundle.prob < back.bundle.prob - 1e-12) {
      raise(Errc::not_monotone, "menu candidates decreased along the boundary order");
    }
    if (diagonal(back.bundle, bundle)) {
      items.push_back({bundle, origin});
    } else if (items.size() > 1) {
      // Merge non-diagonal neighbors, keeping the later (weakly larger)
      // bundle; the bottom item stays (0, 0).
      back = {bundle, origin};
    }
  };
  for (std::size_t i = 1; i < cells.size(); ++i) {
    const double b = cells[i].lower;
    if (b > iv.low && b < iv.high) append(f.at(b), b);
  }
  append(f.at(iv.high), iv.high);

  std::vector<Bundle> menu;
  menu.reserve(items.size());
  for (const auto& it : items) menu.push_back(it.bundle);

  constexpr double kBracketTol = 1e-8;
  std::vector<Preference> thresholds;
  thresholds.reserve(items.size() > 0 ? items.size() - 1 : 0);
  for (std::size_t k = 1; k < items.size(); ++k) {
    Preference star = [&] {
      try {
        return solve_indifferent_preference(iv.family, items[k - 1].bundle,
                                            items[k].bundle, iv);
      } catch (const Error& e) {
        if (e.code() == Errc::out_of_interval) {
          raise(Errc::richness_failure,
                "no interval preference is indifferent between consecutive menu items");
        }
        throw;
      }
    }();
    if (star.param < items[k - 1].origin - kBracketTol ||
        star.param > items[k].origin + kBracketTol) {
      raise(Errc::order_violation,
            "indifference threshold left its bracketing boundaries");
    }
    if (!thresholds.empty() && star.param <= thresholds.back().param) {
      raise(Errc::order_violation, "indifference thresholds failed to increase");
    }
    thresholds.push_back(std::move(star));
  }

  StepMechanism g(std::move(menu), std::move(thresholds), iv);

  // The construction's defining inequality, checked on a fixed grid.
  constexpr int kGrid = 1000;
  for (int i = 0; i < kGrid; ++i) {
    const double param = iv.low + iv.span() * static_cast<double>(i) / (kGrid - 1);
    if (eval_simple(s, param) > g.at(param).transfer + 1e-12) {
      raise(Errc::order_violation,
            "finite mechanism failed to dominate the simple function");
    }
  }
  return g;
}

std::vector<ConvergenceRow> convergence_run(const Mechanism& f,
                                            const ParamMeasure& measure,
                                            std::span<const int> n_values,
                                            double quad_tol, double solver_tol) {
  const double e_full = expected_revenue(f, measure, quad_tol);
  std::vector<ConvergenceRow> rows;
  rows.reserve(n_values.size());
  for (int n : n_values) {
    const SimpleFunction s = simple_function(f, n, measure.interval(), solver_tol);
    const StepMechanism g = build_finite_mechanism(f, s);
    ConvergenceRow row;
    row.n = n;
    row.e_simple = expected_value(s, measure);
    row.e_finite = expected_revenue(Mechanism::step(g), measure, quad_tol);
    row.e_full = e_full;
    row.gap = e_full - row.e_finite;
    row.menu_size = static_cast<int>(g.menu().size());
    if (row.e_simple > row.e_finite + 1e-12) {
      raise(Errc::order_violation,
            "expected value chain E[s_n] <= E[G] failed");
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mechlab
