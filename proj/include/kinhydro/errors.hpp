#pragma once

#include <stdexcept>
#include <string>

namespace kinhydro {

/// Bad input: invalid configuration, mismatched dimensions, violated preconditions.
/// The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

/// A computation produced non-finite values, lost structure, or blew up.
/// The CLI maps this to exit code 2.
class NumericalAbort : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kinhydro
