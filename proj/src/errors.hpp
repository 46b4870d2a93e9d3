#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace qrem {

/// Error families surfaced by the library. The C API maps each one to a
/// stable status code and the CLI maps those to process exit codes.
enum class ErrorKind {
  Domain,          // argument outside the mathematical domain (x not in [0,1), bad base, ...)
  Budget,          // q^n (or q^(nk)) exceeds the evaluation budget
  Tolerance,       // adaptive quadrature could not reach the requested tolerance
  Unsupported,     // model lacks the metadata an operation needs
  Parse,           // model spec / config could not be parsed
  Io,
  Convergence,     // iterative method exhausted its iteration cap
  Precision,       // fixed-point precision too small for the requested depth
  ZeroDensity,     // conditional quantity undefined where f(x) = 0
  Depth,           // depth beyond the ladder's truncation depth
  Rejection,       // rejection sampler exhausted its proposal budget
  Shape,           // model does not have the shape an operation requires
  InvalidArgument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::optional<double> estimate = std::nullopt)
      : std::runtime_error(what), kind_(kind), estimate_(estimate) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Best value reached before giving up (tolerance errors carry the achieved estimate).
  std::optional<double> estimate() const noexcept { return estimate_; }

 private:
  ErrorKind kind_;
  std::optional<double> estimate_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace qrem
