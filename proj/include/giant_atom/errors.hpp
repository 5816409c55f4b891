#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace giant_atom {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or parameters (bad step, bad grid, unknown key).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Precondition on the physics violated (e.g. asking for a dark state at a bright phase).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Query outside the sampled range of a trace.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver did not converge; carries the last iterate.
class IterationFailure : public Error {
 public:
  IterationFailure(const std::string& what, std::complex<double> last)
      : Error(what), last_iterate(last) {}
  std::complex<double> last_iterate;
};

/// Quadrature or time-stepping failed to reach the requested accuracy.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// Requested cascade exceeds the configured memory guard.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Internal consistency check failed (trace drift, ordering).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace giant_atom
