#pragma once

#include <stdexcept>
#include <string>

namespace fockprep {

/// Base for every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Parameters outside the regime an operation is defined for (e.g. A < 0 with B = 0).
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// Wavefunction weight reaches the outer edge of the spatial grid.
class GridTooSmallError : public Error {
 public:
  using Error::Error;
};

class DegeneratePairError : public Error {
 public:
  using Error::Error;
};

/// Adiabaticity integrand vanishes somewhere, so the schedule cannot be inverted.
class FlatDirectionError : public Error {
 public:
  using Error::Error;
};

class UnstableStepError : public Error {
 public:
  using Error::Error;
};

class ReflectionError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fockprep
