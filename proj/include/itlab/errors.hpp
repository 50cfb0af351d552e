#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace itlab {

/// Bad parameters, malformed input files, violated preconditions. CLI exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bound or estimate was requested outside its derivation's validity range.
class PreconditionFailed : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// An exact/exhaustive method was asked to enumerate more states than allowed.
/// CLI exit code 3. `required()` saturates at UINT64_MAX when the true count
/// overflows 64 bits (in which case it exceeds any expressible budget anyway).
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::uint64_t required, std::uint64_t budget, bool overflowed = false)
      : std::runtime_error(format(required, budget, overflowed)),
        required_(required),
        budget_(budget),
        overflowed_(overflowed) {}

  std::uint64_t required() const { return required_; }
  std::uint64_t budget() const { return budget_; }
  bool overflowed() const { return overflowed_; }

 private:
  static std::string format(std::uint64_t required, std::uint64_t budget, bool overflowed) {
    std::string r = overflowed ? ">2^64" : std::to_string(required);
    return "budget exceeded: instance requires " + r + " states, budget is " +
           std::to_string(budget);
  }

  std::uint64_t required_;
  std::uint64_t budget_;
  bool overflowed_;
};

/// File system failure (open/read/write). CLI exit code 4.
class IoError : public std::runtime_error {
 public:
  using IoErrorBase = std::runtime_error;
  using IoErrorBase::IoErrorBase;
};

/// threshold_estimate: a configured point never reaches the target error rate.
class NoCrossing : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace itlab
