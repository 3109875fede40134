#pragma once

#include <stdexcept>
#include <string>

namespace mixedconv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// |det T_E| fell below the nondegeneracy floor.
class NondegeneracyError : public Error {
 public:
  using Error::Error;
};

/// A weight evaluated to a nonpositive (or non-finite) value.
class PositivityError : public Error {
 public:
  using Error::Error;
};

/// Overflow or NaN in an intermediate quantity.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A sampled function returned a non-finite value.
class SamplingError : public Error {
 public:
  using Error::Error;
};

/// A shifted evaluation left the sampled window.
class CoverageError : public Error {
 public:
  using Error::Error;
};

/// A shift does not land on the sample lattice of a grid.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters handed to a constructor or generator.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace mixedconv
