#pragma once

#include <stdexcept>
#include <string>

namespace alab {

// Precondition or domain violation on caller-supplied values (exit code 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An internal postcondition or cross-route consistency check failed.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Unreadable or malformed input files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The duality system has no solution.
class InfeasibleError : public DomainError {
 public:
  using DomainError::DomainError;
};

class PartitionDegenerateError : public DomainError {
 public:
  using DomainError::DomainError;
};

class IllConditionedError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NonUnitRootError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace alab
