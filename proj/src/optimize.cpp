#include "mechlab/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "mechlab/approx.hpp"

namespace mechlab {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

MenuDesign make_menu_design(const PreferenceInterval& interval,
                            std::vector<double> thresholds,
                            std::vector<double> allocations) {
  require(!thresholds.empty() && thresholds.size() == allocations.size(),
          "design needs equally many thresholds and allocations");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    require(std::isfinite(thresholds[i]) && thresholds[i] > interval.low &&
                thresholds[i] <= interval.high,
            "thresholds must lie in (low, high]");
    require(std::isfinite(allocations[i]) && allocations[i] > 0.0 &&
                allocations[i] <= 1.0,
            "allocations must lie in (0, 1]");
    if (i > 0) {
      require(thresholds[i - 1] < thresholds[i],
              "thresholds must be strictly increasing");
      require(allocations[i - 1] < allocations[i],
              "allocations must be strictly increasing");
    }
  }
  std::vector<double> payments;
  payments.reserve(thresholds.size());
  Bundle previous(0.0, 0.0);
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const Preference pivot(interval.family, thresholds[i]);
    const double pay = indiff_transfer(pivot, previous, allocations[i]);
    require(payments.empty() || pay > payments.back(),
            "derived payments must be strictly increasing");
    payments.push_back(pay);
    previous = Bundle(pay, allocations[i]);
  }
  return MenuDesign{interval, std::move(thresholds), std::move(allocations),
                    std::move(payments)};
}

StepMechanism induced_step(const MenuDesign& d) {
  std::vector<Bundle> menu{Bundle(0.0, 0.0)};
  std::vector<Preference> thresholds;
  menu.reserve(d.thresholds.size() + 1);
  thresholds.reserve(d.thresholds.size());
  for (std::size_t i = 0; i < d.thresholds.size(); ++i) {
    menu.emplace_back(d.payments[i], d.allocations[i]);
    thresholds.emplace_back(d.interval.family, d.thresholds[i]);
  }
  return StepMechanism(std::move(menu), std::move(thresholds), d.interval);
}

double revenue_of_menu(const MenuDesign& d, const ParamMeasure& measure) {
  return expected_revenue(Mechanism::step(induced_step(d)), measure);
}

namespace {

// Optimization state: x = [m thresholds, m-1 interior allocations]; the top
// allocation is pinned to 1.
struct Search {
  const PreferenceInterval& interval;
  const ParamMeasure& measure;
  int m;

  int dims() const { return 2 * m - 1; }

  bool feasible(const std::vector<double>& x) const {
    const double lo = interval.low;
    const double hi = interval.high;
    for (int i = 0; i < m; ++i) {
      if (!(x[i] > lo && x[i] < hi)) return false;
      if (i > 0 && !(x[i] > x[i - 1])) return false;
    }
    double prev = 0.0;
    for (int i = m; i < dims(); ++i) {
      if (!(x[i] > prev && x[i] < 1.0)) return false;
      prev = x[i];
    }
    return true;
  }

  double eval(const std::vector<double>& x) const {
    if (!feasible(x)) return -1.0;
    std::vector<double> thresholds(x.begin(), x.begin() + m);
    std::vector<double> allocations(x.begin() + m, x.end());
    allocations.push_back(1.0);
    try {
      return revenue_of_menu(
          make_menu_design(interval, std::move(thresholds), std::move(allocations)),
          measure);
    } catch (const std::invalid_argument&) {
      // Coordinates too close for the derived payments to separate.
      return -1.0;
    }
  }

  // Compass search with halving steps until every step is below step_tol.
  std::pair<std::vector<double>, double> ascend(std::vector<double> x,
                                                double step_tol) const {
    double best = eval(x);
    std::vector<double> steps(static_cast<std::size_t>(dims()));
    for (int i = 0; i < m; ++i) steps[i] = interval.span() / 8.0;
    for (int i = m; i < dims(); ++i) steps[i] = 1.0 / 8.0;
    double max_step = *std::max_element(steps.begin(), steps.end());
    for (long sweep = 0; max_step >= step_tol && sweep < 100000; ++sweep) {
      bool improved = false;
      for (int i = 0; i < dims(); ++i) {
        for (double direction : {1.0, -1.0}) {
          std::vector<double> y = x;
          y[static_cast<std::size_t>(i)] += direction * steps[static_cast<std::size_t>(i)];
          const double value = eval(y);
          if (value > best) {
            best = value;
            x = std::move(y);
            improved = true;
          }
        }
      }
      if (!improved) {
        for (double& s : steps) s *= 0.5;
        max_step *= 0.5;
      }
    }
    return {std::move(x), best};
  }
};

bool lexicographically_before(const std::vector<double>& a,
                              const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Starting points: an evenly spaced design, the best corner of a coarse grid,
// and `restarts` Latin-hypercube samples (the only seed-dependent part).
std::vector<std::vector<double>> starting_points(const Search& search,
                                                 int restarts,
                                                 std::uint64_t seed) {
  const double lo = search.interval.low;
  const double span = search.interval.span();
  const int m = search.m;
  const int dims = search.dims();
  std::vector<std::vector<double>> starts;

  std::vector<double> even(static_cast<std::size_t>(dims));
  for (int i = 0; i < m; ++i) even[i] = lo + span * (i + 1.0) / (m + 1.0);
  for (int i = m; i < dims; ++i) even[i] = (i - m + 1.0) / m;
  starts.push_back(even);

  // Coarse exhaustive scan; skipped once the lattice grows past desk scale.
  if (dims <= 5) {
    const int per_coordinate = (m == 1) ? 33 : (m == 2 ? 16 : 8);
    std::vector<int> index(static_cast<std::size_t>(dims), 0);
    std::vector<double> probe(static_cast<std::size_t>(dims));
    std::vector<double> best_probe;
    double best_value = -1.0;
    while (true) {
      for (int i = 0; i < dims; ++i) {
        const double u = (index[static_cast<std::size_t>(i)] + 0.5) / per_coordinate;
        probe[static_cast<std::size_t>(i)] = (i < m) ? lo + span * u : u;
      }
      const double value = search.eval(probe);
      if (value > best_value) {
        best_value = value;
        best_probe = probe;
      }
      int d = dims - 1;
      while (d >= 0 && ++index[static_cast<std::size_t>(d)] == per_coordinate) {
        index[static_cast<std::size_t>(d)] = 0;
        --d;
      }
      if (d < 0) break;
    }
    if (!best_probe.empty()) starts.push_back(std::move(best_probe));
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<int>> strata(static_cast<std::size_t>(dims));
  for (auto& s : strata) {
    s.resize(static_cast<std::size_t>(restarts));
    for (int r = 0; r < restarts; ++r) s[static_cast<std::size_t>(r)] = r;
    std::shuffle(s.begin(), s.end(), rng);
  }
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> x(static_cast<std::size_t>(dims));
    for (int i = 0; i < dims; ++i) {
      const double u =
          (strata[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)] + unit(rng)) /
          restarts;
      x[static_cast<std::size_t>(i)] = (i < m) ? lo + span * u : u;
    }
    std::sort(x.begin(), x.begin() + m);
    std::sort(x.begin() + m, x.end());
    // Separate coincident coordinates so the start is feasible.
    for (int i = 1; i < m; ++i) {
      x[i] = std::max(x[i], x[i - 1] + span * 1e-9);
    }
    for (int i = m + 1; i < dims; ++i) {
      x[i] = std::min(std::max(x[i], x[i - 1] + 1e-9), 1.0 - 1e-12);
    }
    if (search.feasible(x)) starts.push_back(std::move(x));
  }
  return starts;
}

}  // namespace

MenuOptimum optimize_menu(int m, const PreferenceFamily& family,
                          const PreferenceInterval& interval,
                          const ParamMeasure& measure, int restarts,
                          double step_tol, std::uint64_t seed) {
  require(m >= 1, "menu size must be at least 1");
  require(restarts >= 1, "restarts must be at least 1");
  require(step_tol > 0.0, "step_tol must be positive");
  require(family == interval.family, "family must match the interval");
  require(interval.family == measure.interval().family &&
              interval.low == measure.interval().low &&
              interval.high == measure.interval().high,
          "optimization interval must equal the measure interval");

  const Search search{interval, measure, m};
  std::vector<double> best_x;
  double best_value = -1.0;
  for (auto& start : starting_points(search, restarts, seed)) {
    auto [x, value] = search.ascend(std::move(start), step_tol);
    if (value > best_value ||
        (value == best_value && lexicographically_before(x, best_x))) {
      best_value = value;
      best_x = std::move(x);
    }
  }

  std::vector<double> thresholds(best_x.begin(), best_x.begin() + m);
  std::vector<double> allocations(best_x.begin() + m, best_x.end());
  allocations.push_back(1.0);
  MenuDesign design =
      make_menu_design(interval, std::move(thresholds), std::move(allocations));
  return MenuOptimum{std::move(design), best_value};
}

const char* to_string(RevenueFlag flag) {
  switch (flag) {
    case RevenueFlag::exceeded: return "exceeded";
    case RevenueFlag::tie: return "tie";
    case RevenueFlag::below: return "below";
  }
  return "unknown";
}

CorollaryReport corollary_report(const Mechanism& f, const ParamMeasure& measure,
                                 int m_max, int n_max, int restarts,
                                 double step_tol, std::uint64_t seed,
                                 double quad_tol) {
  require(m_max >= 1, "m_max must be at least 1");
  require(n_max >= 1, "n_max must be at least 1");
  const PreferenceInterval& iv = measure.interval();
  const VerificationReport sp = verify_sp(f, iv, 401, 1e-9);
  const VerificationReport ir = verify_ir(f, iv, 401, 1e-9);
  if (!sp.clean() || !ir.clean()) {
    raise(Errc::not_strategy_proof,
          "input mechanism fails strategy-proofness or individual rationality");
  }

  CorollaryReport report;
  report.e_full = expected_revenue(f, measure, quad_tol);
  report.rows.push_back({"F", report.e_full});

  std::vector<int> ns(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) ns[static_cast<std::size_t>(n - 1)] = n;
  const auto rows = convergence_run(f, measure, ns, quad_tol);
  for (const auto& row : rows) {
    report.rows.push_back({"G_s" + std::to_string(row.n), row.e_finite});
  }
  for (int m = 1; m <= m_max; ++m) {
    const MenuOptimum opt = optimize_menu(m, iv.family, iv, measure, restarts,
                                          step_tol, seed + static_cast<std::uint64_t>(m));
    report.rows.push_back({"menu_m" + std::to_string(m), opt.revenue});
  }

  report.best_finite = 0.0;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    report.best_finite = std::max(report.best_finite, report.rows[i].revenue);
  }
  constexpr double kWindow = 1e-6;
  if (report.best_finite > report.e_full + kWindow) {
    report.flag = RevenueFlag::exceeded;
  } else if (report.best_finite >= report.e_full - kWindow) {
    report.flag = RevenueFlag::tie;
  } else {
    report.flag = RevenueFlag::below;
  }
  return report;
}

}  // namespace mechlab
