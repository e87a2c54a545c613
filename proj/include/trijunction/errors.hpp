#ifndef TRIJUNCTION_ERRORS_HPP
#define TRIJUNCTION_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace trijunction {

// Thrown when sampling finds no delta in the grid for which the Lemma-2.1-style
// bounds hold; carries a description of the first violating sample.
struct CertificationFailed : std::runtime_error {
  explicit CertificationFailed(const std::string& what) : std::runtime_error(what) {}
};

// 1D descent stalled above the gradient tolerance.
struct NonConverged : std::runtime_error {
  explicit NonConverged(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidPath : std::invalid_argument {
  explicit InvalidPath(const std::string& what) : std::invalid_argument(what) {}
};

struct InvalidGeometry : std::invalid_argument {
  explicit InvalidGeometry(const std::string& what) : std::invalid_argument(what) {}
};

// Circle trace does not show all three phases (Lemma 4.1 Cases 1-2 territory).
struct DecompositionFailed : std::runtime_error {
  explicit DecompositionFailed(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace trijunction

#endif
