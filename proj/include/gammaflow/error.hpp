#pragma once

#include <stdexcept>
#include <string>

namespace gammaflow {

/// Argument outside the domain of an operation (bad eps, k, T, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A state that should be unreachable was reached (singular exact system,
/// inconsistent closed forms).
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace gammaflow
