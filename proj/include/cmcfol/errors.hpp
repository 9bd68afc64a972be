#pragma once

#include <stdexcept>
#include <string>

namespace cmcfol {

// Bad input files, unknown keys, missing fields, inconsistent options.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Mathematically invalid state: evaluation inside r_min, non positive
// definite metric sample, surface leaving the admissible region.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Iteration failures: Newton stall, continuation step underflow,
// non convergent extrapolation.
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cmcfol
