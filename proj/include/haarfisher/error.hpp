#pragma once

#include <stdexcept>
#include <string>

namespace haarfisher {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes of the operands do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A numeric argument lies outside the operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The parameterized family has a vanishing QFIM, so relative error metrics
/// are undefined.
class DegenerateFamilyError : public Error {
 public:
  using Error::Error;
};

}  // namespace haarfisher
