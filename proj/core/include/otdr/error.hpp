#pragma once

#include <stdexcept>

namespace otdr {

// Argument outside the mathematical domain of an operation (negative time,
// out-of-range window, non-finite sample).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Inconsistent configuration between otherwise valid objects (mismatched
// sampling intervals, tensor shapes that do not line up).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A file was readable but its contents are not what the loader expects.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// API called out of order, e.g. backward without a forward cache.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace otdr
