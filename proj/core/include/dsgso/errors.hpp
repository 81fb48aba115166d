#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dsgso {

/// Broad failure classes. The CLI maps each one onto a process exit code.
enum class ErrorKind {
  kInvalidParameter,  // exit 2
  kNumericalFailure,  // exit 3
  kIo,                // exit 4
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& what)
      : Error(ErrorKind::kInvalidParameter, what) {}
};

/// Weight matrix has an all-zero row or column; no diagonal scaling can
/// make it doubly stochastic.
class Unbalanceable : public InvalidParameter {
 public:
  explicit Unbalanceable(const std::string& what)
      : InvalidParameter("unbalanceable: " + what) {}
};

/// Sinkhorn-Knopp did not reach the requested tolerance. Usually means the
/// input has support but not total support.
class NotConverged : public Error {
 public:
  NotConverged(double residual, int iterations, const std::string& what)
      : Error(ErrorKind::kNumericalFailure, what),
        residual_(residual),
        iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

class DecompositionFailed : public Error {
 public:
  DecompositionFailed(double residual_mass, const std::string& what)
      : Error(ErrorKind::kNumericalFailure, what),
        residual_mass_(residual_mass) {}

  double residual_mass() const noexcept { return residual_mass_; }

 private:
  double residual_mass_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};

/// Malformed file content. Carries the 1-based line number of the offending
/// line (0 when the problem is not tied to one line).
class ParseError : public InvalidParameter {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& what)
      : InvalidParameter(source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace dsgso
