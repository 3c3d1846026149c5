#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mechlab/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Finite-range mechanism toolkit: approximation, verification, "
               "and menu optimization experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out;
  std::uint64_t seed = 0;
  bool dump = false;

  const auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "experiment config file")->required();
    sub->add_option("--out", out, "output path (default: config's out, else stdout)");
    sub->add_option("--seed", seed, "optimizer restart seed");
    sub->add_flag("--dump-config", dump, "echo the parsed config and exit");
    return sub;
  };
  const CLI::App* approximate =
      add("approximate", "build dominating step mechanisms and tabulate revenue");
  const CLI::App* verify =
      add("verify", "check strategy-proofness, participation, and monotonicity");
  add("optimize", "search for revenue-maximizing finite menus");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const mechlab::ExperimentConfig config =
        mechlab::parse_config_file(config_path);
    if (dump) {
      std::cout << mechlab::dump_config(config);
      return 0;
    }
    if (approximate->parsed()) {
      return mechlab::run_approximate(config, out, std::cerr);
    }
    if (verify->parsed()) {
      return mechlab::run_verify(config, out, std::cerr);
    }
    return mechlab::run_optimize(config, out, seed, std::cerr);
  } catch (const mechlab::Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == mechlab::Errc::config_error ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
