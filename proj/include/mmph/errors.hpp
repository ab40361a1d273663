#pragma once

#include <stdexcept>
#include <string>

namespace mmph {

// Invalid arguments, malformed representations, bad data.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Failures of the numerics: singular systems, divergence, non-convergence.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

class SingularMatrixError : public NumericalError {
 public:
  SingularMatrixError(const std::string& msg, double rcond)
      : NumericalError(msg + " (rcond estimate " + std::to_string(rcond) + ")"),
        rcond_(rcond) {}
  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mmph
