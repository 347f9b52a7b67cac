#pragma once

#include <stdexcept>
#include <string>

namespace smgof {

// Base class for all recoverable domain errors thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An input value, or a simulated state, is NaN or infinite.
class NonFiniteError : public Error {
public:
  using Error::Error;
};

// sigma2(theta, t, x) <= 0 at some grid point; the model and parameter do not
// describe the data at hand.
class NonPositiveVarianceError : public Error {
public:
  using Error::Error;
};

// A block observer was handed a path whose grid is not a fine grid with
// n^2 + 1 points.
class BlockMisalignedError : public Error {
public:
  using Error::Error;
};

// The normal equations of the linear least-squares path are rank deficient.
class SingularDesignError : public Error {
public:
  using Error::Error;
};

// Every multi-start leg of the iterative fit failed the gradient tolerance.
class NoConvergenceError : public Error {
public:
  using Error::Error;
};

// Requested resolution level has 2^J > n.
class LevelTooFineError : public Error {
public:
  using Error::Error;
};

// Haar cascade input length is not a power of two.
class NotPowerOfTwoError : public Error {
public:
  using Error::Error;
};

// More than 10% of bootstrap replications failed estimation.
class BootstrapDegenerateError : public Error {
public:
  using Error::Error;
};

// Malformed configuration or data file.
class BadDataError : public Error {
public:
  using Error::Error;
};

} // namespace smgof
