#pragma once

#include <stdexcept>
#include <string>

namespace cqtraj {

// The velocity field has poles at zeros of psi; raised when an evaluation
// point is within the configured floor of a node.
class NodeSingularityError : public std::runtime_error {
  public:
    explicit NodeSingularityError(const std::string& what) : std::runtime_error(what) {}
};

// Raised by operations that only make sense for stationary states.
class NotStationaryError : public std::runtime_error {
  public:
    explicit NotStationaryError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a real-axis normalization integral does not exist.
class NonNormalizableError : public std::runtime_error {
  public:
    explicit NonNormalizableError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an operation is not defined for the given model variant.
class UnsupportedModelError : public std::runtime_error {
  public:
    explicit UnsupportedModelError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a closed orbit is required but the path does not close.
class NotClosedError : public std::runtime_error {
  public:
    explicit NotClosedError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when contour quadrature refinement fails to converge.
class QuadratureDivergedError : public std::runtime_error {
  public:
    explicit QuadratureDivergedError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a phase increment cannot be refined below pi/2, so the winding
// count would be ambiguous (the path runs into a zero of psi).
class PhaseAmbiguityError : public std::runtime_error {
  public:
    explicit PhaseAmbiguityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cqtraj
