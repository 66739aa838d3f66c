#pragma once

#include <stdexcept>
#include <string>

namespace pairlab {

/// Malformed group tables, action tables or subgroup data.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input is well formed but the requested quantity does not exist (zero measure, trivial window).
class DegenerateInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A precondition of the operation (commuting actions, matching tags) does not hold.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NotAFactorError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A shift or frequency is not representable on the sampling grid.
class DiscretizationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DimensionCapError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Malformed configuration or system description text.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pairlab
