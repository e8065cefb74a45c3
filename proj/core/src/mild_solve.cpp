#include "emhd/mild_solve.hpp"

#include <algorithm>
#include <cmath>

#include "emhd/spectral_ops.hpp"

namespace emhd {

namespace {

struct WindowOutcome {
  bool contracted = false;
  int iterations = 0;
  double change = 0.0;
  std::vector<SpectralVectorField> states;  // steps 1..W
};

WindowOutcome solve_window(const SpectralVectorField& start, double t_a, int steps, double dt,
                           const QProvider& q, const ModelParams& p, const MildSolveOptions& opt,
                           const std::vector<double>& smoothing, const std::vector<double>& dissipation) {
  auto G = [&](const SpectralVectorField& B, double t) {
    SpectralVectorField out = hall_nonlinearity(B, q(t, B), p);
    out += apply_radial_table(B, dissipation);
    return out;
  };

  WindowOutcome w;
  std::vector<SpectralVectorField> old(static_cast<std::size_t>(steps), start);
  double previous_change = 0.0;
  int rising = 0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    std::vector<SpectralVectorField> next;
    next.reserve(old.size());
    SpectralVectorField prev_new = start;
    double change = 0.0, size = 0.0;
    for (int m = 1; m <= steps; ++m) {
      const SpectralVectorField& prev_old = m == 1 ? start : old[static_cast<std::size_t>(m - 2)];
      SpectralVectorField x = prev_new;
      x.add_scaled(dt, G(prev_old, t_a + (m - 1) * dt));
      SpectralVectorField y = dealias(leray_project(apply_radial_table(x, smoothing)));
      const double ny = l2_norm(y);
      if (!std::isfinite(ny) || ny > kBlowUpThreshold)
        throw BlowUpError(t_a + m * dt, "regularized linear solve left the finite range");
      change = std::max(change, l2_norm(y - old[static_cast<std::size_t>(m - 1)]));
      size = std::max(size, ny);
      prev_new = y;
      next.push_back(std::move(y));
    }
    old = std::move(next);
    w.iterations = it;
    w.change = size > 0.0 ? change / size : change;
    if (w.change < opt.tol || change == 0.0) {
      w.contracted = true;
      break;
    }
    rising = (it > 1 && change >= previous_change) ? rising + 1 : 0;
    if (rising >= 2) break;
    previous_change = change;
  }
  w.states = std::move(old);
  return w;
}

}  // namespace

MildSolveResult linear_mild_solve(const SpectralVectorField& B0, const QProvider& q,
                                  const ModelParams& p, const MildSolveOptions& options) {
  p.validate();
  if (!(p.eps_visc > 0.0)) throw PreconditionError("linear_mild_solve requires eps_visc > 0");
  if (!(options.dt > 0.0) || !(options.t_end > options.dt))
    throw PreconditionError("linear_mild_solve needs 0 < dt < t_end");
  if (!q) throw PreconditionError("linear_mild_solve needs a q trajectory");
  require_mean_free(B0, "linear_mild_solve");

  const Grid3& grid = B0.grid();
  const double dt = options.dt;
  const auto smoothing = radial_table(grid, [&](double k) { return std::exp(-p.eps_visc * k * k * k * k * dt); });
  const auto dissipation = radial_table(grid, [&](double k) { return k == 0.0 ? 0.0 : -p.mu * std::pow(k, p.kappa); });
  const long total = static_cast<long>(std::llround(options.t_end / dt));
  if (std::abs(static_cast<double>(total) * dt - options.t_end) > 1e-9 * options.t_end)
    throw PreconditionError("linear_mild_solve: t_end must be a multiple of dt");

  MildSolveResult res;
  res.times.push_back(0.0);
  res.states.push_back(dealias(B0));
  int window = std::max(1, options.window_steps);
  long done = 0;
  while (done < total) {
    const int steps = static_cast<int>(std::min<long>(window, total - done));
    const double t_a = static_cast<double>(done) * dt;
    WindowOutcome w = solve_window(res.states.back(), t_a, steps, dt, q, p, options, smoothing, dissipation);
    res.total_iterations += w.iterations;
    if (!w.contracted) {
      if (res.halvings >= options.max_halvings || window == 1)
        throw WindowTooLongError("regularized fixed-point map does not contract at t = " +
                                 std::to_string(t_a) + " even after " +
                                 std::to_string(res.halvings) + " halvings");
      window = std::max(1, window / 2);
      ++res.halvings;
      continue;
    }
    res.max_window_iterations = std::max(res.max_window_iterations, w.iterations);
    res.final_change = std::max(res.final_change, w.change);
    for (int m = 1; m <= steps; ++m) {
      res.times.push_back(static_cast<double>(done + m) * dt);
      res.states.push_back(std::move(w.states[static_cast<std::size_t>(m - 1)]));
    }
    done += steps;
  }
  res.converged = true;
  return res;
}

}  // namespace emhd
