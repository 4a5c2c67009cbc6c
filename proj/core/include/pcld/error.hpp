#pragma once

#include <stdexcept>
#include <string>

namespace pcld {

/// Malformed or inconsistent input data (bad TSV, unknown ids, out-of-range labels).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated an operation's precondition or passed an invalid configuration.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure during optimisation, e.g. a non-finite gradient.
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pcld
