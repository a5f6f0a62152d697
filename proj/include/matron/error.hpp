#pragma once

#include <stdexcept>
#include <string>

namespace matron {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Matrix / vector dimensions do not agree.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& msg) : Error("shape error: " + msg) {}
};

// Argument outside the effective domain of an operation (empty sets,
// infinite function values where a finite one is required, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error("domain error: " + msg) {}
};

// Input violates a documented contract (e.g. g(empty) != 0).
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& msg) : Error("contract error: " + msg) {}
};

class ConditioningError : public Error {
 public:
  explicit ConditioningError(const std::string& msg) : Error("conditioning error: " + msg) {}
};

// An iterative solver hit its iteration cap. Carries the last residual.
class IterationLimitError : public Error {
 public:
  IterationLimitError(const std::string& msg, double residual)
      : Error("iteration limit: " + msg + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// A welfare instance returned something that fails its own optimality
// certificate mid-run.
class SolverIntegrityError : public Error {
 public:
  explicit SolverIntegrityError(const std::string& msg) : Error("solver integrity: " + msg) {}
};

class StateError : public Error {
 public:
  explicit StateError(const std::string& msg) : Error("state error: " + msg) {}
};

// Brute-force lattice too large for the configured budget.
class SizeError : public Error {
 public:
  explicit SizeError(const std::string& msg) : Error("size error: " + msg) {}
};

// Malformed input document.
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& msg) : Error("schema error: " + msg) {}
};

}  // namespace matron
