#ifndef VORTEXFF_ERRORS_HPP
#define VORTEXFF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vff {

/// Invalid physical or mathematical input (bad quantum numbers, non-finite
/// arguments, violated type invariants).
struct DomainError : std::domain_error {
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A sampled integrand returned a non-finite value; the message carries the
/// offending coordinate.
struct EvaluationError : std::runtime_error {
  explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

/// The supplied integration box does not cover the states' support; the
/// message reports the required box.
struct GridCoverageError : std::runtime_error {
  explicit GridCoverageError(const std::string& what) : std::runtime_error(what) {}
};

/// A profile grid truncates significant amplitude at its boundary.
struct CoverageError : std::runtime_error {
  explicit CoverageError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed run configuration; the message names the key (and line).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vff

#endif
