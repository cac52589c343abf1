#pragma once

#include <stdexcept>
#include <string>

namespace dlat {

/// Invalid argument or violated precondition of a public operation.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A shifted symbol G - z is (numerically) singular, i.e. z is in its spectrum.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested quantity does not exist for this model (e.g. a scalar
/// square for the 3D forward-backward symbol).
class UnsupportedModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input data cannot be fitted (nonpositive values, too few points).
class DegenerateDataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace dlat
