#include "mechlab/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mechlab {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void require_quasilinear(const PreferenceInterval& interval) {
  require(interval.family.id == FamilyId::quasilinear,
          "catalog presets are defined on the quasilinear family");
}

}  // namespace

StepMechanism::StepMechanism(std::vector<Bundle> menu,
                             std::vector<Preference> thresholds,
                             PreferenceInterval interval)
    : menu_(std::move(menu)),
      thresholds_(std::move(thresholds)),
      interval_(interval) {
  require(!menu_.empty(), "step menu must be nonempty");
  require(menu_.front() == Bundle(0.0, 0.0), "step menu must start at (0, 0)");
  require(thresholds_.size() + 1 == menu_.size(),
          "step mechanism needs exactly one threshold per menu transition");
  for (std::size_t i = 0; i + 1 < menu_.size(); ++i) {
    require(diagonal(menu_[i], menu_[i + 1]),
            "step menu items must strictly increase in both coordinates");
  }
  for (std::size_t i = 0; i < thresholds_.size(); ++i) {
    require(thresholds_[i].family == interval_.family,
            "step thresholds must belong to the interval family");
    require(interval_.contains(thresholds_[i].param),
            "step thresholds must lie inside the interval");
    if (i > 0) {
      require(thresholds_[i - 1].param < thresholds_[i].param,
              "step thresholds must be strictly increasing");
    }
  }
}

Bundle StepMechanism::at(double param) const {
  // Left-closed assignment: the item index is the number of thresholds <= param.
  const auto it = std::upper_bound(
      thresholds_.begin(), thresholds_.end(), param,
      [](double v, const Preference& p) { return v < p.param; });
  return menu_[static_cast<std::size_t>(it - thresholds_.begin())];
}

Mechanism::Mechanism(Preset preset, Analytic analytic, const PreferenceInterval& interval)
    : preset_(preset), impl_(std::move(analytic)), interval_(interval) {}

Mechanism::Mechanism(StepMechanism mechanism)
    : preset_(Preset::step),
      impl_(std::move(mechanism)),
      interval_(std::get<StepMechanism>(impl_).interval()) {}

Mechanism Mechanism::quadratic_sp(const PreferenceInterval& interval) {
  require_quasilinear(interval);
  require(interval.high <= 1.0,
          "quadratic_sp allocates q = theta, so the interval must stay in [0, 1]");
  return Mechanism(Preset::quadratic_sp, Analytic{}, interval);
}

Mechanism Mechanism::posted_price(double price, const PreferenceInterval& interval) {
  require_quasilinear(interval);
  require(std::isfinite(price) && price > 0.0, "posted price must be finite and > 0");
  require(interval.contains(price), "posted price must lie inside the interval");
  std::vector<Bundle> menu{Bundle(0.0, 0.0), Bundle(price, 1.0)};
  std::vector<Preference> thresholds{Preference(interval.family, price)};
  StepMechanism step(std::move(menu), std::move(thresholds), interval);
  Mechanism m(std::move(step));
  m.preset_ = Preset::posted_price;
  return m;
}

Mechanism Mechanism::linear_raw(double intercept, double slope,
                                const PreferenceInterval& interval) {
  require_quasilinear(interval);
  require(std::isfinite(intercept) && std::isfinite(slope),
          "linear_raw coefficients must be finite");
  require(interval.high <= 1.0,
          "linear_raw allocates q = theta, so the interval must stay in [0, 1]");
  const double t_low = intercept + slope * interval.low;
  const double t_high = intercept + slope * interval.high;
  require(t_low >= 0.0 && t_high >= 0.0,
          "linear_raw transfers must stay nonnegative on the interval");
  return Mechanism(Preset::linear_raw, Analytic{intercept, slope, {}}, interval);
}

Mechanism Mechanism::piecewise(std::vector<std::pair<double, Bundle>> knots,
                               const PreferenceInterval& interval) {
  require_quasilinear(interval);
  require(knots.size() >= 2, "piecewise needs at least two knots");
  require(knots.front().first == interval.low && knots.back().first == interval.high,
          "piecewise knots must span the interval end to end");
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    require(knots[i].first < knots[i + 1].first,
            "piecewise knot parameters must be strictly increasing");
  }
  return Mechanism(Preset::piecewise, Analytic{0.0, 0.0, std::move(knots)}, interval);
}

Mechanism Mechanism::step(StepMechanism mechanism) {
  return Mechanism(std::move(mechanism));
}

Mechanism::Kind Mechanism::kind() const {
  return std::holds_alternative<StepMechanism>(impl_) ? Kind::step : Kind::analytic;
}

const StepMechanism* Mechanism::as_step() const {
  return std::get_if<StepMechanism>(&impl_);
}

std::vector<double> Mechanism::breakpoints() const {
  std::vector<double> out;
  if (const auto* s = as_step()) {
    out.reserve(s->thresholds().size());
    for (const auto& p : s->thresholds()) out.push_back(p.param);
    return out;
  }
  if (preset_ == Preset::piecewise) {
    const auto& knots = std::get<Analytic>(impl_).knots;
    for (std::size_t i = 1; i + 1 < knots.size(); ++i) out.push_back(knots[i].first);
  }
  return out;
}

Bundle Mechanism::at(double param) const {
  if (const auto* s = as_step()) return s->at(param);
  const auto& a = std::get<Analytic>(impl_);
  switch (preset_) {
    case Preset::quadratic_sp:
      return Bundle(0.5 * param * param, param);
    case Preset::linear_raw:
      return Bundle(a.a + a.b * param, param);
    case Preset::piecewise: {
      const auto it = std::upper_bound(
          a.knots.begin(), a.knots.end(), param,
          [](double v, const std::pair<double, Bundle>& k) { return v < k.first; });
      if (it == a.knots.begin()) return a.knots.front().second;
      if (it == a.knots.end()) return a.knots.back().second;
      const auto& [x1, b1] = *(it - 1);
      const auto& [x2, b2] = *it;
      const double w = (param - x1) / (x2 - x1);
      return Bundle(b1.transfer + w * (b2.transfer - b1.transfer),
                    b1.prob + w * (b2.prob - b1.prob));
    }
    default:
      break;
  }
  throw std::logic_error("unhandled analytic preset");
}

Bundle Mechanism::evaluate(const Preference& r) const {
  require(r.family == interval_.family,
          "preference family must match the mechanism family");
  if (!interval_.contains(r.param)) {
    raise(Errc::out_of_interval, "preference parameter outside the mechanism interval");
  }
  return at(r.param);
}

std::vector<double> verification_grid(const Mechanism& f,
                                      const PreferenceInterval& interval,
                                      int grid_size) {
  require(grid_size >= 2, "grid_size must be at least 2");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(grid_size));
  for (int i = 0; i < grid_size; ++i) {
    grid.push_back(interval.low +
                   interval.span() * static_cast<double>(i) / (grid_size - 1));
  }
  if (const auto* s = f.as_step()) {
    constexpr double kCollar = 1e-9;
    for (const auto& p : s->thresholds()) {
      for (double v : {p.param - kCollar, p.param, p.param + kCollar}) {
        if (interval.contains(v)) grid.push_back(v);
      }
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

namespace {

struct GridEval {
  std::vector<double> params;
  std::vector<Bundle> bundles;
};

GridEval evaluate_grid(const Mechanism& f, const PreferenceInterval& interval,
                       int grid_size) {
  require(interval.low > 0.0, "verification requires a strictly positive interval");
  require(f.interval().family == interval.family,
          "verification interval family must match the mechanism");
  GridEval g;
  g.params = verification_grid(f, interval, grid_size);
  g.bundles.reserve(g.params.size());
  for (double p : g.params) g.bundles.push_back(f.at(p));
  return g;
}

void record(VerificationReport& report, const PreferenceFamily& family,
            double reporter, std::optional<double> other, double gap) {
  report.violation_count += 1;
  report.worst_violation = std::max(report.worst_violation, gap);
  if (report.witnesses.size() < static_cast<std::size_t>(kMaxWitnesses)) {
    Witness w{Preference(family, reporter),
              other ? std::optional<Preference>(Preference(family, *other))
                    : std::nullopt,
              gap};
    report.witnesses.push_back(std::move(w));
  }
}

}  // namespace

VerificationReport verify_sp(const Mechanism& f, const PreferenceInterval& interval,
                             int grid_size, double tol) {
  require(tol > 0.0, "tol must be positive");
  const GridEval g = evaluate_grid(f, interval, grid_size);
  VerificationReport report;
  const std::size_t n = g.params.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double u_truth = utility(interval.family, g.params[i], g.bundles[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double gain =
          utility(interval.family, g.params[i], g.bundles[j]) - u_truth;
      if (gain > tol) {
        record(report, interval.family, g.params[i], g.params[j], gain);
      }
    }
  }
  return report;
}

VerificationReport verify_ir(const Mechanism& f, const PreferenceInterval& interval,
                             int grid_size, double tol) {
  require(tol > 0.0, "tol must be positive");
  const GridEval g = evaluate_grid(f, interval, grid_size);
  VerificationReport report;
  for (std::size_t i = 0; i < g.params.size(); ++i) {
    // utility of the outside option (0,0) is identically zero.
    const double shortfall = -utility(interval.family, g.params[i], g.bundles[i]);
    if (shortfall > tol) {
      record(report, interval.family, g.params[i], std::nullopt, shortfall);
    }
  }
  return report;
}

VerificationReport verify_monotone(const Mechanism& f,
                                   const PreferenceInterval& interval,
                                   int grid_size) {
  constexpr double kTol = 1e-12;
  const GridEval g = evaluate_grid(f, interval, grid_size);
  VerificationReport report;
  for (std::size_t i = 0; i + 1 < g.params.size(); ++i) {
    const double dt = g.bundles[i].transfer - g.bundles[i + 1].transfer;
    const double dq = g.bundles[i].prob - g.bundles[i + 1].prob;
    const double decrease = std::max(dt, dq);
    if (decrease > kTol) {
      record(report, interval.family, g.params[i], g.params[i + 1], decrease);
    }
  }
  return report;
}

}  // namespace mechlab
