#include "mechlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mechlab/mechanism.hpp"
#include "mechlab/quadrature.hpp"

namespace mechlab {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

ParamMeasure::ParamMeasure(Kind kind, double gamma,
                           std::vector<std::pair<double, double>> knots,
                           const PreferenceInterval& interval)
    : kind_(kind), gamma_(gamma), knots_(std::move(knots)), interval_(interval) {}

ParamMeasure ParamMeasure::uniform(const PreferenceInterval& interval) {
  return ParamMeasure(Kind::uniform, 1.0, {}, interval);
}

ParamMeasure ParamMeasure::power(double gamma, const PreferenceInterval& interval) {
  require(std::isfinite(gamma) && gamma > 0.0, "power exponent must be finite and > 0");
  return ParamMeasure(Kind::power, gamma, {}, interval);
}

ParamMeasure ParamMeasure::piecewise_linear(
    std::vector<std::pair<double, double>> knots,
    const PreferenceInterval& interval) {
  std::vector<std::pair<double, double>> full;
  full.reserve(knots.size() + 2);
  full.emplace_back(interval.low, 0.0);
  for (const auto& [param, c] : knots) {
    require(param > full.back().first && param < interval.high,
            "piecewise_linear knot parameters must strictly increase inside the interval");
    require(c > full.back().second && c < 1.0,
            "piecewise_linear knot CDF values must strictly increase inside (0, 1)");
    full.emplace_back(param, c);
  }
  full.emplace_back(interval.high, 1.0);
  return ParamMeasure(Kind::piecewise_linear, 1.0, std::move(full), interval);
}

double ParamMeasure::cdf(double param) const {
  const double u =
      std::clamp((param - interval_.low) / interval_.span(), 0.0, 1.0);
  switch (kind_) {
    case Kind::uniform:
      return u;
    case Kind::power:
      return std::pow(u, gamma_);
    case Kind::piecewise_linear: {
      const auto it = std::upper_bound(
          knots_.begin(), knots_.end(), param,
          [](double v, const std::pair<double, double>& k) { return v < k.first; });
      if (it == knots_.begin()) return 0.0;
      if (it == knots_.end()) return 1.0;
      const auto& [x1, c1] = *(it - 1);
      const auto& [x2, c2] = *it;
      return c1 + (param - x1) / (x2 - x1) * (c2 - c1);
    }
  }
  return u;
}

double ParamMeasure::density(double param) const {
  const double u =
      std::clamp((param - interval_.low) / interval_.span(), 0.0, 1.0);
  switch (kind_) {
    case Kind::uniform:
      return 1.0 / interval_.span();
    case Kind::power:
      if (u == 0.0 && gamma_ < 1.0) return std::numeric_limits<double>::infinity();
      return gamma_ * std::pow(u, gamma_ - 1.0) / interval_.span();
    case Kind::piecewise_linear: {
      auto it = std::upper_bound(
          knots_.begin(), knots_.end(), param,
          [](double v, const std::pair<double, double>& k) { return v < k.first; });
      // Right derivative: the segment starting at or before param.
      if (it == knots_.begin()) ++it;
      if (it == knots_.end()) --it;
      const auto& [x1, c1] = *(it - 1);
      const auto& [x2, c2] = *it;
      return (c2 - c1) / (x2 - x1);
    }
  }
  return 0.0;
}

bool ParamMeasure::bounded_density() const {
  return kind_ != Kind::power || gamma_ >= 1.0;
}

double ParamMeasure::quantile(double c) const {
  require(c >= 0.0 && c <= 1.0, "quantile argument must lie in [0, 1]");
  switch (kind_) {
    case Kind::uniform:
      return interval_.low + interval_.span() * c;
    case Kind::power:
      return interval_.low + interval_.span() * std::pow(c, 1.0 / gamma_);
    case Kind::piecewise_linear: {
      const auto it = std::upper_bound(
          knots_.begin(), knots_.end(), c,
          [](double v, const std::pair<double, double>& k) { return v < k.second; });
      if (it == knots_.begin()) return interval_.low;
      if (it == knots_.end()) return interval_.high;
      const auto& [x1, c1] = *(it - 1);
      const auto& [x2, c2] = *it;
      return x1 + (c - c1) / (c2 - c1) * (x2 - x1);
    }
  }
  return interval_.low;
}

double ParamMeasure::mass(double lower, double upper) const {
  const double slack = 1e-9 * interval_.span();
  if (lower < interval_.low - slack || upper > interval_.high + slack ||
      lower > upper + slack) {
    raise(Errc::out_of_interval, "mass bounds must satisfy low <= lower <= upper <= high");
  }
  lower = std::clamp(lower, interval_.low, interval_.high);
  upper = std::clamp(upper, std::max(lower, interval_.low), interval_.high);
  return cdf(upper) - cdf(lower);
}

namespace {

// Split points inside (low, high): mechanism breakpoints plus CDF knots.
std::vector<double> integration_nodes(const Mechanism& f, const ParamMeasure& m) {
  const auto& iv = m.interval();
  std::vector<double> nodes{iv.low, iv.high};
  for (double b : f.breakpoints()) {
    if (b > iv.low && b < iv.high) nodes.push_back(b);
  }
  for (const auto& [param, c] : m.knots()) {
    if (param > iv.low && param < iv.high) nodes.push_back(param);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

double step_revenue(const StepMechanism& s, const ParamMeasure& m) {
  const auto& iv = m.interval();
  const auto& menu = s.menu();
  const auto& thresholds = s.thresholds();
  double total = 0.0;
  for (std::size_t i = 0; i < menu.size(); ++i) {
    double lo = (i == 0) ? iv.low : std::clamp(thresholds[i - 1].param, iv.low, iv.high);
    double hi = (i + 1 < menu.size())
                    ? std::clamp(thresholds[i].param, iv.low, iv.high)
                    : iv.high;
    if (hi > lo) total += menu[i].transfer * m.mass(lo, hi);
  }
  return total;
}

}  // namespace

double expected_revenue(const Mechanism& f, const ParamMeasure& m, double quad_tol) {
  require(quad_tol > 0.0, "quad_tol must be positive");
  const auto& iv = m.interval();
  require(f.interval().family == iv.family,
          "measure and mechanism families must match");
  if (f.interval().low > iv.low || f.interval().high < iv.high) {
    raise(Errc::out_of_interval, "mechanism is not total on the measure interval");
  }
  if (const auto* s = f.as_step()) return step_revenue(*s, m);

  const std::vector<double> nodes = integration_nodes(f, m);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double a = nodes[i];
    const double b = nodes[i + 1];
    if (m.bounded_density()) {
      const double tol = quad_tol * (b - a) / iv.span();
      total += quadrature::adaptive_simpson(
          [&](double x) { return f.payment(x) * m.density(x); }, a, b, tol);
    } else {
      // Integrate in the CDF variable to sidestep the density singularity.
      const double ca = m.cdf(a);
      const double cb = m.cdf(b);
      const double tol = quad_tol * std::max(cb - ca, 1e-6);
      total += quadrature::adaptive_simpson(
          [&](double c) { return f.payment(m.quantile(c)); }, ca, cb, tol);
    }
  }
  return std::max(total, 0.0);
}

}  // namespace mechlab
