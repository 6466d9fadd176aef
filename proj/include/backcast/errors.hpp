#pragma once

#include <stdexcept>
#include <string>

namespace backcast {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain where an operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Inverse transform of a spectrum that is not Hermitian enough to be a real field.
class ImaginaryResidueTooLarge : public Error {
 public:
  using Error::Error;
};

class ZeroNoiseVector : public Error {
 public:
  using Error::Error;
};

/// Regularization parameter does not follow the rule a theorem assumes.
class RuleMismatch : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Gevrey weight too strong for the fixture: the weighted spectral integral diverges.
class GammaTooLarge : public Error {
 public:
  using Error::Error;
};

/// Malformed CSV or other external input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace backcast
