#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace searchreal {

// Caller bug: descriptor, value and precision shapes disagree.
class structural_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Input outside the mathematical domain of an operation.
class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a search or enumeration would exceed its evaluation budget.
class budget_exceeded : public std::runtime_error {
 public:
  budget_exceeded(const std::string& what, std::uint64_t bound, std::uint64_t budget)
      : std::runtime_error(what), bound_(bound), budget_(budget) {}

  // The bound that tripped the check (candidate count or evaluations used).
  std::uint64_t bound() const noexcept { return bound_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t bound_;
  std::uint64_t budget_;
};

}  // namespace searchreal
