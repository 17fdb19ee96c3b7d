#pragma once

#include <stdexcept>
#include <string>

namespace qam {

/// Base of all library errors. Carries the process exit code the CLI maps
/// each category to: 2 input, 3 domain/range, 4 convergence, 5 verification.
class Error : public std::runtime_error {
 public:
  Error(const std::string& msg, int exit_code)
      : std::runtime_error(msg), exit_code_(exit_code) {}

  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

/// Malformed caller input: bad coefficients, mismatched lengths, bad flags.
struct InputError : Error {
  explicit InputError(const std::string& msg) : Error(msg, 2) {}
};

/// Argument outside the open domain of a function or map.
struct DomainError : Error {
  explicit DomainError(const std::string& msg) : Error(msg, 3) {}
};

/// Value outside the open range of a function (inversion impossible).
struct RangeError : Error {
  explicit RangeError(const std::string& msg) : Error(msg, 3) {}
};

/// Accumulated transformed values left the representable doubles.
struct OverflowError : Error {
  explicit OverflowError(const std::string& msg) : Error(msg, 3) {}
};

/// Requested functional root does not exist (even order of a decreasing map).
struct NoRootError : Error {
  explicit NoRootError(const std::string& msg) : Error(msg, 3) {}
};

/// a = -1 makes the neutral map an involution; involutions are excluded from
/// scale construction because their root ladder cannot be formed.
struct ExcludedInvolutionError : Error {
  explicit ExcludedInvolutionError(const std::string& msg) : Error(msg, 2) {}
};

/// Solve target outside the open interval (min v, max v).
struct TargetOutOfRangeError : Error {
  explicit TargetOutOfRangeError(const std::string& msg) : Error(msg, 3) {}
};

/// Iteration cap reached before the tolerance was met.
struct ConvergenceError : Error {
  explicit ConvergenceError(const std::string& msg) : Error(msg, 4) {}
};

/// Scale index bracket hit its cap; the target sits against a sample extreme.
struct NearExtremeError : Error {
  explicit NearExtremeError(const std::string& msg) : Error(msg, 4) {}
};

/// A witness search that must succeed came up empty.
struct WitnessNotFoundError : Error {
  explicit WitnessNotFoundError(const std::string& msg) : Error(msg, 5) {}
};

}  // namespace qam
