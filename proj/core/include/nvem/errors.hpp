#pragma once

#include <stdexcept>
#include <string>

namespace nvem {

/// Malformed input: mesh files, config files, VTK field sizes.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Geometric preconditions violated (degenerate elements, non-star-shaped fans).
class GeometryError : public std::runtime_error {
 public:
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

/// Solver-level failure: singular systems, factorization breakdown.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nvem
