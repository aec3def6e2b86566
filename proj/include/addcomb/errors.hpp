#pragma once

#include <stdexcept>
#include <string>

namespace addcomb {

// Every failure surfaced by the library derives from Error. kind() is a
// stable machine-readable tag used in CLI error objects.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error("invalid_argument", what) {}
};

// A caller-side precondition that the library checks (e.g. |f| <= 1).
class ContractViolation : public Error {
 public:
  explicit ContractViolation(const std::string& what) : Error("contract_violation", what) {}
};

// A verified bound failed after computation. Always an implementation bug.
class PostconditionViolation : public Error {
 public:
  explicit PostconditionViolation(const std::string& what)
      : Error("postcondition_violation", what) {}
};

class ScaleExhausted : public Error {
 public:
  explicit ScaleExhausted(const std::string& what) : Error("scale_exhausted", what) {}
};

class IncrementNotFound : public Error {
 public:
  explicit IncrementNotFound(const std::string& what) : Error("increment_not_found", what) {}
};

class DichotomyFailed : public Error {
 public:
  explicit DichotomyFailed(const std::string& what) : Error("dichotomy_failed", what) {}
};

class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what) : Error("capacity", what) {}
};

}  // namespace addcomb
