#ifndef RIPD_ERRORS_HPP
#define RIPD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ripd {

/// An argument violates a precondition (layout mismatch, nonpositive step, ...).
class InvalidInputError : public std::invalid_argument {
 public:
  explicit InvalidInputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A run configuration fails a feasibility requirement and is refused.
class ConfigRejectedError : public std::invalid_argument {
 public:
  explicit ConfigRejectedError(const std::string& what) : std::invalid_argument(what) {}
};

/// An operator/metric combination that the toolbox does not implement.
class UnsupportedError : public std::runtime_error {
 public:
  explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

/// The iteration produced non-finite values.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(long iteration, const std::string& what)
      : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}
  long iteration() const { return iteration_; }

 private:
  long iteration_;
};

/// A dual block was activated while a primal block it reads was not.
class CouplingViolationError : public std::runtime_error {
 public:
  explicit CouplingViolationError(const std::string& what) : std::runtime_error(what) {}
};

/// File could not be read, written, or parsed.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ripd

#endif  // RIPD_ERRORS_HPP
