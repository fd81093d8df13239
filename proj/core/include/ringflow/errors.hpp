#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ringflow {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input data (too few vertices, negative radius, NaN coordinates).
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Inner region is not strictly inside the outer one.
class ContainmentError : public Error {
public:
  using Error::Error;
};

/// Inner region touches the outer boundary; the ring has no gap.
class DegenerateGapError : public Error {
public:
  using Error::Error;
};

/// Geometry cannot be meshed at the requested resolution.
class ResolutionError : public Error {
public:
  using Error::Error;
};

/// Argument outside the documented valid range.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Nonlinear solve failed to converge; carries the residual history.
class SolveError : public Error {
public:
  SolveError(const std::string& what, std::vector<double> residuals)
      : Error(what), residual_history(std::move(residuals)) {}
  std::vector<double> residual_history;
};

/// Streamline crossed another one transversally: a tracing-accuracy failure.
class IntegrityError : public Error {
public:
  using Error::Error;
};

/// A trace ended before reaching the inner boundary where it was required to.
class TraceIncompleteError : public Error {
public:
  using Error::Error;
};

/// Bad run configuration (unknown key, value out of range, empty p list).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// File could not be read or written, or has an unrecognized format.
class IoError : public Error {
public:
  using Error::Error;
};

} // namespace ringflow
