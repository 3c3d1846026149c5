#pragma once

#include <stdexcept>
#include <string>

namespace mechlab {

enum class Errc {
  no_solution,
  not_diagonal,
  out_of_interval,
  degenerate_corner,
  not_monotone,
  not_strategy_proof,
  richness_failure,
  order_violation,
  config_error,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) {
  throw Error(code, std::string(to_string(code)) + ": " + msg);
}

inline const char* to_string(Errc code) {
  switch (code) {
    case Errc::no_solution: return "no_solution";
    case Errc::not_diagonal: return "not_diagonal";
    case Errc::out_of_interval: return "out_of_interval";
    case Errc::degenerate_corner: return "degenerate_corner";
    case Errc::not_monotone: return "not_monotone";
    case Errc::not_strategy_proof: return "not_strategy_proof";
    case Errc::richness_failure: return "richness_failure";
    case Errc::order_violation: return "order_violation";
    case Errc::config_error: return "config_error";
  }
  return "unknown";
}

}  // namespace mechlab
