#include "emhd/picard.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <memory>

#include "emhd/spectral_ops.hpp"

namespace emhd {

namespace {

const SpectralVectorField& zero_q(const SpectralVectorField& like) {
  thread_local std::unique_ptr<SpectralVectorField> cache;
  if (!cache || cache->grid() != like.grid()) cache = std::make_unique<SpectralVectorField>(like.grid());
  return *cache;
}

RunRecord run_iterate(const SpectralVectorField& B0, const ModelParams& p, const StepperConfig& st,
                      const RunRecord* previous) {
  StepperConfig every_step = st;
  every_step.snapshot_every = 1;
  EvolveOptions opts;
  opts.keep_states = true;
  if (previous) {
    auto q = std::make_shared<FrozenQ>(previous->times, previous->states);
    opts.frozen_q = [q](double t, const SpectralVectorField&) -> const SpectralVectorField& {
      return q->at(t);
    };
  } else {
    opts.frozen_q = [](double, const SpectralVectorField& s) -> const SpectralVectorField& {
      return zero_q(s);
    };
  }
  return evolve(B0, p, every_step, opts);
}

double difference_norm(const RunRecord& a, const RunRecord* b, double sigma, double p) {
  std::vector<double> values(a.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i)
    values[i] = b ? sobolev_norm(a.states[i] - b->states[i], sigma) : sobolev_norm(a.states[i], sigma);
  return time_lp_norm(a.times, values, p);
}

double sup_critical(const RunRecord& r) {
  double m = 0.0;
  for (double x : r.hs_sigma_c) m = std::max(m, x);
  return m;
}

}  // namespace

void PicardConfig::validate() const {
  if (max_outer < 1) throw PreconditionError("picard max_outer must be at least 1");
  if (!(contraction_tol > 0.0)) throw PreconditionError("picard contraction_tol must be positive");
  if (!(diff_norm_time_p >= 1.0)) throw PreconditionError("picard time exponent must be >= 1");
}

double time_lp_norm(const std::vector<double>& times, const std::vector<double>& values, double p) {
  if (times.size() != values.size()) throw ShapeError("time_lp_norm: length mismatch");
  if (times.size() < 2) return values.empty() ? 0.0 : values.front();
  double sum = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i)
    sum += 0.5 * (times[i] - times[i - 1]) * (std::pow(values[i], p) + std::pow(values[i - 1], p));
  return std::pow(sum, 1.0 / p);
}

PicardResult picard_solve(const SpectralVectorField& B0, const ModelParams& p,
                          const PicardConfig& cfg, const StepperConfig& stepper) {
  cfg.validate();
  const double sigma = cfg.diff_norm_sigma > 0.0 ? cfg.diff_norm_sigma : 2.0 * p.kappa / 3.0;
  using clock = std::chrono::steady_clock;

  ConvergenceTrace trace;
  auto t0 = clock::now();
  RunRecord current = run_iterate(B0, p, stepper, nullptr);
  const double base = difference_norm(current, nullptr, sigma, cfg.diff_norm_time_p);
  trace.diff_norm.push_back(base);
  trace.ratio.push_back(std::numeric_limits<double>::quiet_NaN());
  trace.sup_critical_norm.push_back(sup_critical(current));
  trace.wall_seconds.push_back(std::chrono::duration<double>(clock::now() - t0).count());

  double first_diff = 0.0;
  int rising = 0;
  for (int n = 1; n <= cfg.max_outer; ++n) {
    t0 = clock::now();
    RunRecord next;
    try {
      next = run_iterate(B0, p, stepper, &current);
    } catch (const BlowUpError& e) {
      throw DivergenceError(std::string("Picard iterate blew up: ") + e.what(),
                            std::make_shared<ConvergenceTrace>(trace));
    }
    const double diff = difference_norm(next, &current, sigma, cfg.diff_norm_time_p);
    const double prev = trace.diff_norm.back();
    const double ratio = prev > 0.0 ? diff / prev : 0.0;
    trace.diff_norm.push_back(diff);
    trace.ratio.push_back(ratio);
    trace.sup_critical_norm.push_back(sup_critical(next));
    trace.wall_seconds.push_back(std::chrono::duration<double>(clock::now() - t0).count());
    current = std::move(next);

    if (n == 1) first_diff = diff;
    if (diff <= 1e-14 * base || (n > 1 && diff < cfg.contraction_tol * first_diff)) {
      trace.converged = true;
      break;
    }
    rising = (n > 1 && ratio >= 1.0) ? rising + 1 : 0;
    if (rising >= 3)
      throw DivergenceError("Picard iteration stopped contracting (three ratios >= 1)",
                            std::make_shared<ConvergenceTrace>(trace));
  }
  current.status = trace.converged ? RunStatus::completed : RunStatus::diverged;
  return PicardResult{std::move(current), std::move(trace)};
}

}  // namespace emhd
