#pragma once

#include <functional>
#include <optional>
#include <random>

#include "mechlab/errors.hpp"

namespace mechlab::test {

// Runs f and reports the Errc it raised, if any.
inline std::optional<Errc> code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline std::mt19937_64 seeded_rng(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

}  // namespace mechlab::test
