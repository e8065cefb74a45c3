// Acceptance criteria, one PASS/FAIL line each. Exit status is the number of
// failed criteria (capped at 1 for ctest).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "emhd/diagnostics.hpp"
#include "emhd/errors.hpp"
#include "emhd/fft.hpp"
#include "emhd/littlewood_paley.hpp"
#include "emhd/mild_solve.hpp"
#include "emhd/model.hpp"
#include "emhd/picard.hpp"
#include "emhd/random_fields.hpp"
#include "emhd/spectral_ops.hpp"
#include "emhd/stepper.hpp"

using namespace emhd;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("error: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s  AC%-2d %-28s %s  [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(),
              seconds_since(t0));
  std::fflush(stdout);
}

EvolveOptions keep_states() {
  EvolveOptions o;
  o.keep_states = true;
  return o;
}

SpectralVectorField seeded(const Grid3& g, std::uint64_t seed, double sigma, double amplitude,
                           double lo = 1, double hi = 4) {
  return rescale_to_norm(random_band_field(g, seed, lo, hi), sigma, amplitude);
}

// --------------------------------------------------------------------- 1
Outcome beltrami_exactness() {
  const Grid3 g(16);
  const auto B0 = beltrami_field(g);
  double hall = 0.0, err = 0.0, slowest = 0.0;
  for (auto [s, kappa] : {std::pair{0.0, 2.25}, {0.4, 1.5}, {-0.4, 2.85}}) {
    const ModelParams p{s, kappa, 1.0, 0.0};
    if (check_admissible(p) != Admissibility::theorem_range) return {false, "pair outside the admissible range"};
    hall = std::max(hall, l2_norm(hall_nonlinearity(B0, B0, p)));
    const auto t0 = Clock::now();
    const RunRecord rec = evolve(B0, p, StepperConfig{1e-3, 1.0, Scheme::etd2rk, 10}, keep_states());
    slowest = std::max(slowest, seconds_since(t0));
    for (std::size_t i = 0; i < rec.size(); ++i) {
      const double decay = std::exp(-rec.times[i]);
      err = std::max(err, l2_norm(rec.states[i] - decay * B0) / (decay * l2_norm(B0)));
    }
  }
  return {hall < 1e-12 && err < 1e-8 && slowest < 5.0,
          fmt("hall=%.2e (<1e-12) rel_err=%.2e (<1e-8) slowest_run=%.2fs (<5s)", hall, err, slowest)};
}

// --------------------------------------------------------------------- 2
Outcome littlewood_paley_suite() {
  const auto t0 = Clock::now();
  const Grid3 g(32);
  const double partition = partition_of_unity_defect(g);
  double recon = 0.0, bony = 0.0;
  const DyadicRange r = dyadic_range(g);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto u = random_band_field(g, 1000 + seed, 1, g.dealias_cutoff());
    const auto v = random_band_field(g, 2000 + seed, 1, g.dealias_cutoff());
    recon = std::max(recon, l2_norm(lp_reconstruct(u) - u) / l2_norm(u));
    const auto prod = dealias(forward_transform(dot_product(inverse_transform(u), inverse_transform(v))));
    for (int j = r.j_min; j <= r.j_max; ++j)
      bony = std::max(bony, l2_norm(bony_decompose(u, v, j).sum() - product_block(u, v, j)) / l2_norm(prod));
  }
  const double elapsed = seconds_since(t0);
  return {partition < 1e-12 && recon < 1e-10 && bony < 1e-10 && elapsed < 10.0,
          fmt("partition=%.2e (<1e-12) recon=%.2e (<1e-10) bony=%.2e (<1e-10) time=%.1fs (<10s)", partition,
              recon, bony, elapsed)};
}

// --------------------------------------------------------------------- 3
Outcome energy_law_order() {
  const Grid3 g(32);
  const ModelParams p{0.0, 2.25, 1.0, 0.0};
  const auto B0 = seeded(g, 303, p.sigma_c(), 1.0);
  std::vector<double> dts{4e-3, 2e-3, 1e-3}, excursions;
  for (double dt : dts) {
    const RunRecord rec = evolve(B0, p, StepperConfig{dt, 0.2, Scheme::etd2rk, 1});
    excursions.push_back(energy_balance(rec, p).max_abs_residual);
  }
  const double order = convergence_order(dts, excursions);
  const bool decreasing = excursions[1] < excursions[0] && excursions[2] < excursions[1];
  return {decreasing && order >= 1.7,
          fmt("excursions=%.2e,%.2e,%.2e order=%.2f (>=1.7)", excursions[0], excursions[1], excursions[2], order)};
}

// --------------------------------------------------------------------- 4
Outcome twisted_cancellation() {
  const Grid3 g(32);
  double worst = 0.0;
  for (double s : {-0.4, 0.0, 0.4}) {
    const ModelParams p{s, 2.0, 1.0, 0.0};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto B = random_band_field(g, 4000 + seed, 1, g.dealias_cutoff());
      const auto H = hall_nonlinearity(B, B, p);
      const auto L = fractional_laplacian(B, -s);
      worst = std::max(worst, std::abs(inner_product(H, L)) / (l2_norm(H) * l2_norm(L)));
    }
  }
  return {worst < 1e-10, fmt("max normalized pairing=%.2e (<1e-10)", worst)};
}

// --------------------------------------------------------------------- 5
Outcome picard_contraction() {
  const Grid3 g(32);
  const ModelParams p{0.0, 2.25, 1.0, 0.0};
  const StepperConfig st{1e-2, 0.5, Scheme::etd2rk, 1};
  const auto B0 = seeded(g, 505, p.sigma_c(), 1e-2);
  const PicardResult r = picard_solve(B0, p, PicardConfig{}, st);
  double best = INFINITY;
  std::string ratios;
  for (std::size_t n = 1; n < r.trace.ratio.size(); ++n) {
    if (n <= 3) best = std::min(best, r.trace.ratio[n]);
    ratios += fmt("%s%.2e", n == 1 ? "" : ",", r.trace.ratio[n]);
  }
  const RunRecord direct = evolve(B0, p, st, keep_states());
  const double match = l2_norm(direct.states.back() - r.record.states.back()) / l2_norm(direct.states.back());
  return {r.trace.converged && best < 0.5 && match < 1e-6,
          fmt("ratios=[%s] min(n<=3)=%.2e (<0.5) rel_L2_vs_direct=%.2e (<1e-6)", ratios.c_str(), best, match)};
}

// --------------------------------------------------------------------- 6
Outcome scaling_symmetry() {
  const Grid3 g(32);
  const ModelParams p{0.2, 2.0, 1.0, 0.0};
  const auto B0 = seeded(g, 606, p.sigma_c(), 0.5);
  const ScalingReport a = scaling_symmetry_check(B0, p, 2, StepperConfig{1e-3, 0.05, Scheme::etd2rk, 1});
  const ScalingReport b = scaling_symmetry_check(B0, p, 2, StepperConfig{5e-4, 0.05, Scheme::etd2rk, 1});
  return {a.discrepancy < 1e-4 && b.discrepancy < a.discrepancy,
          fmt("32^3/64^3 t*=0.05: dt=1e-3 -> %.2e (<1e-4), dt=5e-4 -> %.2e (smaller)", a.discrepancy,
              b.discrepancy)};
}

// --------------------------------------------------------------------- 7
Outcome gevrey_smoothing() {
  const Grid3 g(64);
  const ModelParams p{0.0, 2.0, 1.0, 0.0};
  const double alpha = 1.0;
  const auto B0 = rescale_to_norm(power_law_field(g, 707, p.sigma_c() + 1.5, 1, g.dealias_cutoff()), p.sigma_c(), 1e-2);
  // Horizon 0.5 keeps at least seven shells above the fit floor at the final
  // snapshot; by t = 1 only five remain and the fitted slope drifts upward.
  const StepperConfig st{5e-3, 0.5, Scheme::etd2rk, 1};
  EvolveOptions heat;
  const FrozenQ zero({0.0}, {SpectralVectorField(g)});
  heat.frozen_q = zero.provider();
  heat.observer = [alpha](RunRecord& rec, const SpectralVectorField& s) { fill_gevrey_fit(rec, s, alpha); };
  const GevreyRateReport control = gevrey_rate_check(evolve(B0, p, st, heat), p, alpha);

  EvolveOptions full;
  full.observer = heat.observer;
  const GevreyRateReport nonlinear = gevrey_rate_check(evolve(B0, p, st, full), p, alpha);
  const bool early_ok = control.early_ratio < 0.05;
  return {control.applicable && control.increasing && early_ok && control.slope_within,
          fmt("heat: increasing=%s early_ratio=%.3f (<0.05) slope=%.3f (expected %.3f +-30%%); "
              "nonlinear (reported): slope=%.3f early_ratio=%.3f",
              control.increasing ? "yes" : "no", control.early_ratio, control.slope, control.slope_expected,
              nonlinear.slope, nonlinear.early_ratio)};
}

// --------------------------------------------------------------------- 8
Outcome decay_exponent() {
  const Grid3 g(32);
  std::string detail;
  bool pass = true;
  for (double kappa : {2.0, 2.25}) {
    const ModelParams p{0.0, kappa, 1.0, 0.0};
    const auto B0 = rescale_to_norm(power_law_field(g, 808, p.sigma_c() + 1.5, 1, g.dealias_cutoff()), p.sigma_c(), 1e-2);
    const RunRecord rec = evolve(B0, p, StepperConfig{1e-3, 0.2, Scheme::etd2rk, 5}, keep_states());
    const DecayFit k0 = decay_fit(rec.times, rec.states, p, 0, 0.01, {0.01, 0.2});
    const DecayFit k1 = decay_fit(rec.times, rec.states, p, 1, 0.01, {0.01, 0.2});
    const double diff = k1.slope - k0.slope;
    pass = pass && std::abs(diff + 1.0 / kappa) <= 0.3;
    detail += fmt("%skappa=%.2f: k1-k0=%.3f (expected %.3f +-0.3, %d pts)", detail.empty() ? "" : "; ", kappa,
                  diff, -1.0 / kappa, k0.points);
  }
  return {pass, detail};
}

// --------------------------------------------------------------------- 9
Outcome uniqueness_stability() {
  const Grid3 g(32);
  const ModelParams p{0.0, 2.25, 1.0, 0.0};
  const auto B0 = seeded(g, 909, p.sigma_c(), 1e-2);
  const auto dB = random_band_field(g, 910, 1, 4);
  const StepperConfig st{5e-3, 1.0, Scheme::etd2rk, 1};
  const StabilityReport a = stability_check(B0, dB, 1e-6, p, st);
  const StabilityReport b = stability_check(B0, dB, 5e-7, p, st);
  const double response = b.difference.back() / a.difference.back();
  return {a.pass && a.growth_factor <= 10.0 && std::abs(response / 0.5 - 1.0) <= 0.2,
          fmt("growth=%.3f (<=10) halved-eta response=%.4f (0.5 +-20%%) c_fit=%.2e", a.growth_factor, response,
              a.c_fit)};
}

// --------------------------------------------------------------------- 10
Outcome regularized_solve() {
  const Grid3 g(16);
  const ModelParams base{0.0, 2.25, 1.0, 0.0};
  const auto B0 = seeded(g, 1010, base.sigma_c(), 0.2);
  const FrozenQ q({0.0}, {B0});
  const double T = 0.1, h = 4e-3;

  EvolveOptions ref_opts = keep_states();
  ref_opts.frozen_q = q.provider();
  const auto reference = evolve(B0, base, StepperConfig{h / 64, T, Scheme::etd2rk, 1 << 30}, ref_opts).states.back();

  std::vector<double> errors;
  bool converged = true;
  std::string detail;
  double dt = h;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    ModelParams p = base;
    p.eps_visc = eps;
    MildSolveOptions o;
    o.dt = dt;
    o.t_end = T;
    o.tol = 1e-10;
    const MildSolveResult r = linear_mild_solve(B0, q.provider(), p, o);
    converged = converged && r.converged && r.final_change <= 1e-10;
    errors.push_back(l2_norm(r.states.back() - reference) / l2_norm(reference));
    detail += fmt("%seps=%.0e dt=%.0e err=%.2e it=%d", detail.empty() ? "" : "; ", eps, dt, errors.back(),
                  r.max_window_iterations);
    dt /= 2;
  }
  const bool monotone = errors[1] < errors[0] && errors[2] < errors[1];
  return {converged && monotone, detail + (monotone ? " (monotone)" : " (not monotone)")};
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  criterion(1, "beltrami_exactness", beltrami_exactness);
  criterion(2, "littlewood_paley_suite", littlewood_paley_suite);
  criterion(3, "energy_law_order", energy_law_order);
  criterion(4, "twisted_cancellation", twisted_cancellation);
  criterion(5, "picard_contraction", picard_contraction);
  criterion(6, "scaling_symmetry", scaling_symmetry);
  criterion(7, "gevrey_smoothing", gevrey_smoothing);
  criterion(8, "decay_exponent", decay_exponent);
  criterion(9, "uniqueness_stability", uniqueness_stability);
  criterion(10, "regularized_solve", regularized_solve);
  std::printf("%d of 10 criteria failed  [%.1f s total]\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
