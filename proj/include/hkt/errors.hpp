#pragma once

#include <stdexcept>
#include <string>

namespace hkt {

// Invalid input or a violated mathematical precondition (CLI exit code 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A tolerance check failed on otherwise well-formed input (CLI exit code 2).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hkt
