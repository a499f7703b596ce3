#pragma once

#include <stdexcept>
#include <string>

namespace frd {

/// Parameter or geometry outside the admissible domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Adaptive quadrature could not reach the requested tolerance within its node budget.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved_rel_error, int nodes_used)
      : std::runtime_error(what), achieved_(achieved_rel_error), nodes_(nodes_used) {}

  double achieved_rel_error() const noexcept { return achieved_; }
  int nodes_used() const noexcept { return nodes_; }

 private:
  double achieved_;
  int nodes_;
};

/// A decomposition failed one of its certified properties (psd, range, sum).
class ContractViolation : public std::runtime_error {
 public:
  ContractViolation(std::string invariant, std::string offender, double value)
      : std::runtime_error(invariant + " violated at " + offender + " (value " +
                           std::to_string(value) + ")"),
        invariant_(std::move(invariant)),
        offender_(std::move(offender)),
        value_(value) {}

  const std::string& invariant() const noexcept { return invariant_; }
  const std::string& offender() const noexcept { return offender_; }
  double value() const noexcept { return value_; }

 private:
  std::string invariant_;
  std::string offender_;
  double value_;
};

/// Missing, truncated or malformed files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace frd
