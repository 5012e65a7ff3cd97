#pragma once

#include <stdexcept>
#include <string>

namespace vfb {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an operation needs invertible phase contrast (kappa1 != kappa2
// and mu1 != mu2) and the phases do not provide it. Never worked around by
// perturbation: near-equal moduli are accepted and produce honestly large
// numbers, exact equality is rejected.
struct ContrastError : Error {
    explicit ContrastError(const std::string& what) : Error(what) {}
};

// Invalid argument values: volume fraction outside (0,1), nonpositive
// modulus, malformed grids, and similar.
struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(what) {}
};

// Text input that could not be parsed. `line` is 1-based when known, 0 otherwise.
struct ParseError : Error {
    std::size_t line = 0;
    ParseError(const std::string& what, std::size_t line_no = 0)
        : Error(line_no ? what + " (line " + std::to_string(line_no) + ")" : what),
          line(line_no) {}
};

// Structurally valid input that fails semantic validation (degenerate
// polygon, zero area, inconsistent configuration).
struct ValidationError : Error {
    explicit ValidationError(const std::string& what) : Error(what) {}
};

// Iterative or linear solver failure (non-convergence, singular system).
struct SolverError : Error {
    explicit SolverError(const std::string& what) : Error(what) {}
};

} // namespace vfb
