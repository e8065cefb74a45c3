#pragma once

#include <vector>

#include "emhd/stepper.hpp"

namespace emhd {

/// Outer iteration of the approximating sequence. The iteration stops when
/// the successive difference drops below contraction_tol times the first
/// difference. A non-positive diff_norm_sigma selects 2 kappa / 3.
struct PicardConfig {
  int max_outer = 30;
  double contraction_tol = 1e-8;
  double diff_norm_sigma = -1.0;
  double diff_norm_time_p = 3.0;

  void validate() const;

  friend bool operator==(const PicardConfig&, const PicardConfig&) = default;
};

/// Per-iteration record. Entry 0 describes B^0 itself (its norm stands in for
/// the difference, ratio NaN); entry n >= 1 compares B^n with B^(n-1).
struct ConvergenceTrace {
  std::vector<double> diff_norm;
  std::vector<double> ratio;
  std::vector<double> sup_critical_norm;
  std::vector<double> wall_seconds;
  bool converged = false;

  std::size_t iterations() const noexcept { return diff_norm.empty() ? 0 : diff_norm.size() - 1; }
};

struct PicardResult {
  RunRecord record;  // final iterate, states at every step
  ConvergenceTrace trace;
};

/// (int_0^T ||X(t)||_{H^sigma}^p dt)^(1/p) by the composite trapezoid rule
/// over the sample times.
double time_lp_norm(const std::vector<double>& times, const std::vector<double>& values, double p);

/// B^0 is the linear heat flow of B0; B^(n+1) solves the linear flow with the
/// nonlinearity frozen against q = B^n. Throws DivergenceError (with trace)
/// after three consecutive ratios >= 1.
PicardResult picard_solve(const SpectralVectorField& B0, const ModelParams& p,
                          const PicardConfig& cfg, const StepperConfig& stepper);

}  // namespace emhd
