#include "mechlab/runner.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mechlab/approx.hpp"
#include "mechlab/errors.hpp"
#include "mechlab/optimize.hpp"

namespace mechlab {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Returns 0, or 2 when the path cannot be opened.
int write_output(const std::string& text, const ExperimentConfig& config,
                 const std::string& out_override, std::ostream& diag) {
  const std::string path = out_override.empty() ? config.out : out_override;
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path);
  if (!out) {
    diag << "cannot open output path '" << path << "'\n";
    return 2;
  }
  out << text;
  return out ? 0 : 2;
}

void describe(std::ostream& out, const std::string& name,
              const VerificationReport& report, const char* gap_phrase) {
  out << name << ": " << report.violation_count << " violation"
      << (report.violation_count == 1 ? "" : "s");
  if (!report.clean()) out << ", worst " << fmt(report.worst_violation);
  out << "\n";
  for (const auto& w : report.witnesses) {
    out << "  reporter " << fmt(w.reporter.param);
    if (w.other) out << " vs " << fmt(w.other->param);
    out << " " << gap_phrase << " " << fmt(w.gap) << "\n";
  }
}

int map_error(const Error& e, std::ostream& diag) {
  diag << e.what() << "\n";
  return e.code() == Errc::config_error ? 2 : 3;
}

Mechanism required_mechanism(const ExperimentConfig& config) {
  auto mech = config_mechanism(config);
  if (!mech) raise(Errc::config_error, "key 'mechanism': required for this command");
  return *std::move(mech);
}

}  // namespace

int run_approximate(const ExperimentConfig& config, const std::string& out_override,
                    std::ostream& diag) {
  try {
    const Mechanism mech = required_mechanism(config);
    const ParamMeasure measure = config_measure(config);
    const PreferenceInterval interval = config_interval(config);

    const auto sp = verify_sp(mech, interval, config.grid_size, config.sp_tol);
    const auto ir = verify_ir(mech, interval, config.grid_size, config.sp_tol);
    if (!sp.clean() || !ir.clean()) {
      diag << "mechanism fails verification\n";
      describe(diag, "strategy_proof", sp, "gains");
      describe(diag, "individually_rational", ir, "falls short by");
      return 3;
    }

    const auto rows =
        convergence_run(mech, measure, config.n_values, config.quad_tol);
    std::ostringstream csv;
    csv << "n,e_simple,e_finite,e_full,gap,menu_size\n";
    for (const auto& row : rows) {
      csv << row.n << "," << fmt(row.e_simple) << "," << fmt(row.e_finite) << ","
          << fmt(row.e_full) << "," << fmt(row.gap) << "," << row.menu_size
          << "\n";
    }
    return write_output(csv.str(), config, out_override, diag);
  } catch (const Error& e) {
    return map_error(e, diag);
  } catch (const std::invalid_argument& e) {
    diag << e.what() << "\n";
    return 2;
  }
}

int run_verify(const ExperimentConfig& config, const std::string& out_override,
               std::ostream& diag) {
  try {
    const Mechanism mech = required_mechanism(config);
    const PreferenceInterval interval = config_interval(config);

    const auto sp = verify_sp(mech, interval, config.grid_size, config.sp_tol);
    const auto ir = verify_ir(mech, interval, config.grid_size, config.sp_tol);
    const auto mono = verify_monotone(mech, interval, config.grid_size);

    std::ostringstream report;
    describe(report, "strategy_proof", sp, "gains");
    describe(report, "individually_rational", ir, "falls short by");
    describe(report, "monotone", mono, "decreases by");
    const bool clean = sp.clean() && ir.clean() && mono.clean();
    report << (clean ? "clean\n" : "violations found\n");

    const int rc = write_output(report.str(), config, out_override, diag);
    if (rc != 0) return rc;
    return clean ? 0 : 3;
  } catch (const Error& e) {
    return map_error(e, diag);
  } catch (const std::invalid_argument& e) {
    diag << e.what() << "\n";
    return 2;
  }
}

int run_optimize(const ExperimentConfig& config, const std::string& out_override,
                 std::uint64_t seed, std::ostream& diag) {
  try {
    const PreferenceFamily family = config_family(config);
    const PreferenceInterval interval = config_interval(config);
    const ParamMeasure measure = config_measure(config);

    std::ostringstream csv;
    csv << "m,revenue,thresholds,allocations,payments\n";
    for (int m = 1; m <= config.m_max; ++m) {
      const MenuOptimum best =
          optimize_menu(m, family, interval, measure, config.restarts,
                        config.step_tol, seed + static_cast<std::uint64_t>(m));
      csv << m << "," << fmt(best.revenue);
      for (double v : best.design.thresholds) csv << "," << fmt(v);
      for (double v : best.design.allocations) csv << "," << fmt(v);
      for (double v : best.design.payments) csv << "," << fmt(v);
      csv << "\n";
    }
    if (config.mechanism) {
      const Mechanism mech = *config_mechanism(config);
      csv << "F," << fmt(expected_revenue(mech, measure, config.quad_tol)) << "\n";
    }
    return write_output(csv.str(), config, out_override, diag);
  } catch (const Error& e) {
    return map_error(e, diag);
  } catch (const std::invalid_argument& e) {
    diag << e.what() << "\n";
    return 2;
  }
}

}  // namespace mechlab
