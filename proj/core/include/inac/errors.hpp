#pragma once

#include <stdexcept>
#include <string>

namespace inac {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration or input violated a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Two points that must be distinct coincide (line of sight undefined).
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

/// The normal matrix is singular, so the weight-coefficient matrix and the
/// PDoP do not exist for this anchor set.
class PdopUndefined : public Error {
 public:
  using Error::Error;
};

/// Every selection candidate produced an undefined score.
class NoFeasibleSelection : public Error {
 public:
  using Error::Error;
};

}  // namespace inac
