#pragma once

#include <stdexcept>
#include <string>

namespace smdp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Index out of range, dimension mismatch, or similar caller mistake.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A model, schedule or function failed structural validation.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Parameter outside its admissible range (e.g. alpha_bar > t_min).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Linear solve or similar numerical step could not be completed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A function handed in does not honour its declared contract (e.g. not SISTr).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class IterationLimitError : public Error {
 public:
  IterationLimitError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Iterates left the finite range or crossed the divergence guard.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file, config, or trace.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace smdp
