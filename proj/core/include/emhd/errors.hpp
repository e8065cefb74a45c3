#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace emhd {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coefficients of a field flagged real are not Hermitian-symmetric.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// A negative fractional power met a field with a nonzero k=0 coefficient.
class MeanModeError : public Error {
 public:
  using Error::Error;
};

/// Two fields live on different grids, or array shapes disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A product would alias: inputs carry modes outside the dealiased band.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Gevrey multiplier exponent above the overflow guard.
class RadiusError : public Error {
 public:
  using Error::Error;
};

/// A least-squares fit had too little data.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Fit window is malformed or falls in the spectral-gap regime.
class WindowError : public Error {
 public:
  using Error::Error;
};

/// Input data unusable for the requested diagnostic.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Configuration text failed to parse or validate. `line()` is 0 when the
/// problem is not tied to a specific line.
class ConfigError : public Error {
 public:
  ConfigError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct RunRecord;
struct ConvergenceTrace;

/// State became non-finite or exceeded the blow-up threshold. Carries the
/// time reached and, when raised from `evolve`, the partial record.
class BlowUpError : public Error {
 public:
  BlowUpError(double time, const std::string& what,
              std::shared_ptr<const RunRecord> partial = nullptr)
      : Error(what), time_(time), partial_(std::move(partial)) {}
  double time() const noexcept { return time_; }
  const std::shared_ptr<const RunRecord>& partial() const noexcept { return partial_; }

 private:
  double time_;
  std::shared_ptr<const RunRecord> partial_;
};

/// Picard iteration stopped contracting. Carries the trace collected so far.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::shared_ptr<const ConvergenceTrace> trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::shared_ptr<const ConvergenceTrace>& trace() const noexcept { return trace_; }

 private:
  std::shared_ptr<const ConvergenceTrace> trace_;
};

/// Fixed-point map of the regularized linear solve failed to contract even
/// after repeated window halving.
class WindowTooLongError : public Error {
 public:
  using Error::Error;
};

}  // namespace emhd
