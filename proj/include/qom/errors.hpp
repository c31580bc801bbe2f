#pragma once

#include <stdexcept>
#include <string>

namespace qom {

// Bad parameter values or malformed configuration.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Operation undefined for the given parameters (e.g. CP analysis with g >= 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Closed form requested outside the anti-PT regime it is valid in.
class RegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A formula hit an exactly vanishing denominator it cannot represent.
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qom
