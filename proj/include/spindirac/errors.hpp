#pragma once

#include <stdexcept>
#include <string>

namespace spindirac {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidLatticeError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

/// Input for which the requested quantity is undefined (Dφ ≈ 0, φ ≡ 0, ...).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Configuration or file content that fails validation. `field` names the
/// offending key when known.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class ClosednessError : public Error {
 public:
  using Error::Error;
};

}  // namespace spindirac
