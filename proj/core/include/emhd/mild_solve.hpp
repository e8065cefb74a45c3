#pragma once

#include <vector>

#include "emhd/stepper.hpp"

namespace emhd {

struct MildSolveOptions {
  double dt = 1e-3;
  double t_end = 1.0;
  /// Steps per continuation window before any halving.
  int window_steps = 16;
  /// Stop when the sup-in-time L^2 change falls below tol times the
  /// sup-in-time L^2 size of the iterate.
  double tol = 1e-10;
  int max_iterations = 200;
  int max_halvings = 20;
};

struct MildSolveResult {
  std::vector<double> times;
  std::vector<SpectralVectorField> states;
  int total_iterations = 0;
  int max_window_iterations = 0;
  int halvings = 0;
  double final_change = 0.0;
  bool converged = false;
};

/// Fixed point of the discrete regularized Duhamel map on successive
/// windows [t_a, t_a + W dt]:
///   B(t_m) = S(t_m - t_a) B(t_a) + dt sum_{i<m} S(t_m - t_i) G(B(t_i), q(t_i)),
/// with S = exp(-eps_visc Lambda^4 t) and G(B, q) = -mu Lambda^kappa B +
/// hall_nonlinearity(B, q). A window whose iteration stops contracting is
/// halved (WindowTooLongError after max_halvings).
MildSolveResult linear_mild_solve(const SpectralVectorField& B0, const QProvider& q,
                                  const ModelParams& p, const MildSolveOptions& options);

}  // namespace emhd
