#include "mechlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <tuple>

namespace mechlab {

namespace {

[[noreturn]] void config_fail(const std::string& key, const std::string& why) {
  raise(Errc::config_error, "key '" + key + "': " + why);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v.empty()) config_fail(key, "expected a number");
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || !std::isfinite(d)) {
    config_fail(key, "'" + v + "' is not a finite number");
  }
  return d;
}

int parse_int(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v.empty()) config_fail(key, "expected an integer");
  char* end = nullptr;
  const long n = std::strtol(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size()) config_fail(key, "'" + v + "' is not an integer");
  return static_cast<int>(n);
}

std::vector<double> parse_doubles(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& token : split_ws(value)) out.push_back(parse_double(key, token));
  return out;
}

std::vector<double> parse_colon_tuple(const std::string& key,
                                      const std::string& token, std::size_t arity) {
  std::vector<double> parts;
  std::string::size_type start = 0;
  while (true) {
    const auto colon = token.find(':', start);
    parts.push_back(parse_double(key, token.substr(start, colon - start)));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  if (parts.size() != arity) {
    config_fail(key, "'" + token + "' must have " + std::to_string(arity) +
                         " colon-separated fields");
  }
  return parts;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::set<std::string> kKnownKeys = {
    "family",     "alpha",     "interval_low", "interval_high", "mechanism",
    "price",      "intercept", "slope",        "knots",         "menu",
    "thresholds", "measure",   "gamma",        "cdf_knots",     "n_values",
    "m_max",      "grid_size", "sp_tol",       "quad_tol",      "step_tol",
    "restarts",   "out"};

void check_applicability(const ExperimentConfig& c) {
  const auto present = [&](const char* key) { return c.present.count(key) > 0; };
  const auto wants = [&](const char* key, bool applicable, const char* context) {
    if (present(key) && !applicable) {
      config_fail(key, std::string("only applies when ") + context);
    }
    if (!present(key) && applicable) {
      config_fail(key, std::string("required when ") + context);
    }
  };

  wants("alpha", c.family == FamilyId::quadratic_money, "family = quadratic_money");

  const std::string mech = c.mechanism.value_or("");
  wants("price", mech == "posted_price", "mechanism = posted_price");
  wants("intercept", mech == "linear_raw", "mechanism = linear_raw");
  wants("slope", mech == "linear_raw", "mechanism = linear_raw");
  wants("knots", mech == "piecewise", "mechanism = piecewise");
  wants("menu", mech == "step", "mechanism = step");
  wants("thresholds", mech == "step", "mechanism = step");
  if (c.mechanism && mech != "step" && c.family != FamilyId::quasilinear) {
    config_fail("mechanism", "catalog presets require family = quasilinear");
  }

  wants("gamma", c.measure == "power", "measure = power");
  wants("cdf_knots", c.measure == "piecewise_linear", "measure = piecewise_linear");
}

}  // namespace

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.family == b.family && a.alpha == b.alpha &&
         a.interval_low == b.interval_low && a.interval_high == b.interval_high &&
         a.mechanism == b.mechanism && a.price == b.price &&
         a.intercept == b.intercept && a.slope == b.slope && a.knots == b.knots &&
         a.menu == b.menu && a.thresholds == b.thresholds &&
         a.measure == b.measure && a.gamma == b.gamma &&
         a.cdf_knots == b.cdf_knots && a.n_values == b.n_values &&
         a.m_max == b.m_max && a.grid_size == b.grid_size &&
         a.sp_tol == b.sp_tol && a.quad_tol == b.quad_tol &&
         a.step_tol == b.step_tol && a.restarts == b.restarts && a.out == b.out;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      raise(Errc::config_error,
            "line " + std::to_string(line_number) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (kKnownKeys.count(key) == 0) config_fail(key, "unknown key");
    if (!c.present.insert(key).second) config_fail(key, "duplicate key");

    if (key == "family") {
      if (value == "quasilinear") {
        c.family = FamilyId::quasilinear;
      } else if (value == "quadratic_money") {
        c.family = FamilyId::quadratic_money;
      } else {
        config_fail(key, "'" + value + "' is not a known family");
      }
    } else if (key == "alpha") {
      c.alpha = parse_double(key, value);
      if (c.alpha < 0.0) config_fail(key, "must be >= 0");
    } else if (key == "interval_low") {
      c.interval_low = parse_double(key, value);
    } else if (key == "interval_high") {
      c.interval_high = parse_double(key, value);
    } else if (key == "mechanism") {
      static const std::set<std::string> presets = {
          "quadratic_sp", "posted_price", "linear_raw", "piecewise", "step"};
      if (presets.count(value) == 0) {
        config_fail(key, "'" + value + "' is not a known mechanism preset");
      }
      c.mechanism = value;
    } else if (key == "price") {
      c.price = parse_double(key, value);
      if (c.price <= 0.0) config_fail(key, "must be > 0");
    } else if (key == "intercept") {
      c.intercept = parse_double(key, value);
    } else if (key == "slope") {
      c.slope = parse_double(key, value);
    } else if (key == "knots") {
      for (const auto& token : split_ws(value)) {
        const auto t = parse_colon_tuple(key, token, 3);
        c.knots.emplace_back(t[0], t[1], t[2]);
      }
      if (c.knots.size() < 2) config_fail(key, "needs at least two param:t:q triples");
    } else if (key == "menu") {
      for (const auto& token : split_ws(value)) {
        const auto t = parse_colon_tuple(key, token, 2);
        c.menu.emplace_back(t[0], t[1]);
      }
    } else if (key == "thresholds") {
      c.thresholds = parse_doubles(key, value);
    } else if (key == "measure") {
      static const std::set<std::string> kinds = {"uniform", "power",
                                                  "piecewise_linear"};
      if (kinds.count(value) == 0) {
        config_fail(key, "'" + value + "' is not a known measure");
      }
      c.measure = value;
    } else if (key == "gamma") {
      c.gamma = parse_double(key, value);
      if (c.gamma <= 0.0) config_fail(key, "must be > 0");
    } else if (key == "cdf_knots") {
      for (const auto& token : split_ws(value)) {
        const auto t = parse_colon_tuple(key, token, 2);
        c.cdf_knots.emplace_back(t[0], t[1]);
      }
    } else if (key == "n_values") {
      c.n_values.clear();
      for (const auto& token : split_ws(value)) {
        const int n = parse_int(key, token);
        if (n < 1 || n > 20) config_fail(key, "entries must lie in [1, 20]");
        c.n_values.push_back(n);
      }
    } else if (key == "m_max") {
      c.m_max = parse_int(key, value);
      if (c.m_max < 1) config_fail(key, "must be >= 1");
    } else if (key == "grid_size") {
      c.grid_size = parse_int(key, value);
      if (c.grid_size < 2) config_fail(key, "must be >= 2");
    } else if (key == "sp_tol") {
      c.sp_tol = parse_double(key, value);
      if (c.sp_tol <= 0.0) config_fail(key, "must be > 0");
    } else if (key == "quad_tol") {
      c.quad_tol = parse_double(key, value);
      if (c.quad_tol <= 0.0) config_fail(key, "must be > 0");
    } else if (key == "step_tol") {
      c.step_tol = parse_double(key, value);
      if (c.step_tol <= 0.0) config_fail(key, "must be > 0");
    } else if (key == "restarts") {
      c.restarts = parse_int(key, value);
      if (c.restarts < 1) config_fail(key, "must be >= 1");
    } else if (key == "out") {
      c.out = value;
    }
  }

  if (!(c.interval_low >= 0.0)) config_fail("interval_low", "must be >= 0");
  if (!(c.interval_high > c.interval_low)) {
    config_fail("interval_high", "must exceed interval_low");
  }
  check_applicability(c);
  return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::config_error, "cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string dump_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "family = "
      << (c.family == FamilyId::quasilinear ? "quasilinear" : "quadratic_money")
      << "\n";
  if (c.family == FamilyId::quadratic_money) {
    out << "alpha = " << fmt_double(c.alpha) << "\n";
  }
  out << "interval_low = " << fmt_double(c.interval_low) << "\n";
  out << "interval_high = " << fmt_double(c.interval_high) << "\n";
  if (c.mechanism) {
    out << "mechanism = " << *c.mechanism << "\n";
    if (*c.mechanism == "posted_price") {
      out << "price = " << fmt_double(c.price) << "\n";
    } else if (*c.mechanism == "linear_raw") {
      out << "intercept = " << fmt_double(c.intercept) << "\n";
      out << "slope = " << fmt_double(c.slope) << "\n";
    } else if (*c.mechanism == "piecewise") {
      out << "knots =";
      for (const auto& [param, t, q] : c.knots) {
        out << " " << fmt_double(param) << ":" << fmt_double(t) << ":"
            << fmt_double(q);
      }
      out << "\n";
    } else if (*c.mechanism == "step") {
      out << "menu =";
      for (const auto& [t, q] : c.menu) {
        out << " " << fmt_double(t) << ":" << fmt_double(q);
      }
      out << "\n";
      out << "thresholds =";
      for (double v : c.thresholds) out << " " << fmt_double(v);
      out << "\n";
    }
  }
  out << "measure = " << c.measure << "\n";
  if (c.measure == "power") out << "gamma = " << fmt_double(c.gamma) << "\n";
  if (c.measure == "piecewise_linear") {
    out << "cdf_knots =";
    for (const auto& [param, cdf] : c.cdf_knots) {
      out << " " << fmt_double(param) << ":" << fmt_double(cdf);
    }
    out << "\n";
  }
  out << "n_values =";
  for (int n : c.n_values) out << " " << n;
  out << "\n";
  out << "m_max = " << c.m_max << "\n";
  out << "grid_size = " << c.grid_size << "\n";
  out << "sp_tol = " << fmt_double(c.sp_tol) << "\n";
  out << "quad_tol = " << fmt_double(c.quad_tol) << "\n";
  out << "step_tol = " << fmt_double(c.step_tol) << "\n";
  out << "restarts = " << c.restarts << "\n";
  if (!c.out.empty()) out << "out = " << c.out << "\n";
  return out.str();
}

PreferenceFamily config_family(const ExperimentConfig& c) {
  if (c.family == FamilyId::quadratic_money) {
    return PreferenceFamily::quadratic_money(c.alpha);
  }
  return PreferenceFamily::quasilinear();
}

PreferenceInterval config_interval(const ExperimentConfig& c) {
  try {
    return PreferenceInterval(config_family(c), c.interval_low, c.interval_high);
  } catch (const std::invalid_argument& e) {
    raise(Errc::config_error, std::string("key 'interval_low': ") + e.what());
  }
}

ParamMeasure config_measure(const ExperimentConfig& c) {
  const PreferenceInterval iv = config_interval(c);
  try {
    if (c.measure == "power") return ParamMeasure::power(c.gamma, iv);
    if (c.measure == "piecewise_linear") {
      return ParamMeasure::piecewise_linear(c.cdf_knots, iv);
    }
    return ParamMeasure::uniform(iv);
  } catch (const std::invalid_argument& e) {
    raise(Errc::config_error, std::string("key 'measure': ") + e.what());
  }
}

std::optional<Mechanism> config_mechanism(const ExperimentConfig& c) {
  if (!c.mechanism) return std::nullopt;
  const PreferenceInterval iv = config_interval(c);
  const std::string& name = *c.mechanism;
  try {
    if (name == "quadratic_sp") return Mechanism::quadratic_sp(iv);
    if (name == "posted_price") return Mechanism::posted_price(c.price, iv);
    if (name == "linear_raw") return Mechanism::linear_raw(c.intercept, c.slope, iv);
    if (name == "piecewise") {
      std::vector<std::pair<double, Bundle>> knots;
      knots.reserve(c.knots.size());
      for (const auto& [param, t, q] : c.knots) {
        knots.emplace_back(param, Bundle(t, q));
      }
      return Mechanism::piecewise(std::move(knots), iv);
    }
    if (c.menu.size() != c.thresholds.size()) {
      raise(Errc::config_error,
            "key 'thresholds': step needs one threshold per menu item");
    }
    std::vector<Bundle> menu{Bundle(0.0, 0.0)};
    std::vector<Preference> thresholds;
    for (const auto& [t, q] : c.menu) menu.emplace_back(t, q);
    for (double v : c.thresholds) thresholds.emplace_back(iv.family, v);
    return Mechanism::step(StepMechanism(std::move(menu), std::move(thresholds), iv));
  } catch (const std::invalid_argument& e) {
    raise(Errc::config_error, std::string("key 'mechanism': ") + e.what());
  }
}

}  // namespace mechlab
