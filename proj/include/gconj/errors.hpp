#pragma once

#include <stdexcept>
#include <string>

namespace gconj {

// Malformed input: mismatched groups, invalid tables, words over the wrong
// alphabet, morphisms that fail their declared checks.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// The request is well-formed but outside what this build can decide
// (e.g. negative morphism power without inverse images, subgroup slicing
// over a non-abelian base).
struct CapabilityError : std::runtime_error {
  explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

// A hard resource cap was exceeded while *constructing* an object (balls,
// quotients).  Solver budget exhaustion is reported as an Unknown verdict,
// not an exception.
struct BudgetError : std::runtime_error {
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gconj
