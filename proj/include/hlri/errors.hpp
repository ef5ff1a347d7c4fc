#pragma once

#include <stdexcept>
#include <string>

namespace hlri {

// Invalid user-supplied parameters or configuration files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A physical value outside the support of its marginal distribution.
class DomainError : public std::domain_error {
 public:
  DomainError(std::size_t coordinate, const std::string& what)
      : std::domain_error(what), coordinate_(coordinate) {}
  std::size_t coordinate() const noexcept { return coordinate_; }

 private:
  std::size_t coordinate_;
};

// Caller broke an operation's precondition (non-unit direction, unrepaired
// genotype, empty elite, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Bit string decodes to a raw direction of (numerically) zero length.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The standard-space origin is on or beyond the failure surface, so the
// repair increment and the penalty scaling are undefined.
class DegenerateProblem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hlri
