#include "emhd/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>

#include "emhd/config.hpp"
#include "emhd/diagnostics.hpp"
#include "emhd/fft.hpp"
#include "emhd/mild_solve.hpp"
#include "emhd/model.hpp"
#include "emhd/picard.hpp"
#include "emhd/random_fields.hpp"
#include "emhd/spectral_ops.hpp"
#include "emhd/stepper.hpp"

namespace emhd {

namespace {

using clock_type = std::chrono::steady_clock;

class Suite {
 public:
  Suite(VerifyReport& report, std::ostream* progress) : report_(report), progress_(progress) {}

  // Passes when measured <= threshold.
  void at_most(const std::string& suite, const std::string& name, double measured, double threshold,
               const std::string& detail = {}) {
    add({suite, name, measured <= threshold, measured, threshold, detail});
  }
  void holds(const std::string& suite, const std::string& name, bool ok, double measured = 0.0,
             const std::string& detail = {}) {
    add({suite, name, ok, measured, 0.0, detail});
  }
  // Runs `body`; any library error becomes a failed check.
  void guarded(const std::string& suite, const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      add({suite, name, false, std::numeric_limits<double>::quiet_NaN(), 0.0,
           std::string("error: ") + e.what()});
    }
  }

 private:
  void add(CheckResult r) {
    if (progress_) *progress_ << format(r) << std::flush;
    report_.checks.push_back(std::move(r));
  }

 public:
  static std::string format(const CheckResult& r) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "measured=%.3e", r.measured);
    std::string line = std::string(r.pass ? "PASS" : "FAIL") + "  " + r.suite + "/" + r.name + "  " + buf;
    if (r.threshold != 0.0) {
      std::snprintf(buf, sizeof buf, "  threshold=%.3e", r.threshold);
      line += buf;
    }
    if (!r.detail.empty()) line += "  (" + r.detail + ")";
    return line + "\n";
  }

 private:
  VerifyReport& report_;
  std::ostream* progress_;
};

// Smooth, non-solenoidal real field: dealiased transform of grid noise.
SpectralVectorField noise_field(const Grid3& grid, std::uint64_t seed) {
  const CounterRng rng(seed);
  PhysicalVectorField f(grid);
  for (std::size_t i = 0; i < f.data().size(); ++i) f.data()[i] = rng.normal(i);
  SpectralVectorField F = dealias(forward_transform(f));
  for (int c = 0; c < 3; ++c) F(c, 0) = 0.0;
  return F;
}

double rel(double a, double b) { return b == 0.0 ? a : a / b; }

void spectral_suite(Suite& s, const Grid3& g, std::uint64_t seed) {
  const std::string S = "spectral";
  s.guarded(S, "round_trip", [&] {
    const CounterRng rng(seed);
    PhysicalVectorField f(g);
    for (std::size_t i = 0; i < f.data().size(); ++i) f.data()[i] = rng.normal(i);
    const auto back = inverse_transform(forward_transform(f));
    double err = 0.0;
    for (std::size_t i = 0; i < f.data().size(); ++i) err = std::max(err, std::abs(back.data()[i] - f.data()[i]));
    s.at_most(S, "round_trip", rel(err, max_abs(f)), 1e-12);
    s.at_most(S, "parseval", rel(std::abs(physical_l2_norm(f) - l2_norm(forward_transform(f))), physical_l2_norm(f)), 1e-12);
  });
  s.guarded(S, "leray", [&] {
    const auto F = noise_field(g, seed + 1), G = noise_field(g, seed + 2);
    const auto PF = leray_project(F), PG = leray_project(G);
    s.at_most(S, "leray_idempotent", rel(l2_norm(leray_project(PF) - PF), l2_norm(F)), 1e-12);
    s.at_most(S, "leray_self_adjoint",
              rel(std::abs(inner_product(PF, G) - inner_product(F, PG)), l2_norm(F) * l2_norm(G)), 1e-12);
    s.at_most(S, "leray_divergence_free", rel(max_abs(divergence(PF)), max_abs(F)), 1e-12);
  });
  s.guarded(S, "calculus", [&] {
    const auto F = noise_field(g, seed + 3);
    SpectralScalarField f(g);
    std::copy(F.component(0).begin(), F.component(0).end(), f.component(0).begin());
    s.at_most(S, "curl_of_gradient", rel(max_abs(curl(gradient(f))), max_abs(f) * g.max_magnitude()), 1e-12);
    s.at_most(S, "divergence_of_curl", rel(max_abs(divergence(curl(F))), max_abs(F) * g.max_magnitude()), 1e-12);
    const double commute = l2_norm(fractional_laplacian(curl(F), 1.3) - curl(fractional_laplacian(F, 1.3)));
    s.at_most(S, "curl_commutes_with_lambda", rel(commute, l2_norm(fractional_laplacian(curl(F), 1.3))), 1e-12);
    const double comp = l2_norm(fractional_laplacian(fractional_laplacian(F, 0.7), -1.3) - fractional_laplacian(F, -0.6));
    s.at_most(S, "lambda_composition", rel(comp, l2_norm(fractional_laplacian(F, -0.6))), 1e-12);
    const auto B = beltrami_field(g);
    s.at_most(S, "beltrami_curl_eigen", rel(l2_norm(curl(B) - B), l2_norm(B)), 1e-12);
  });
}

void lp_suite(Suite& s, const Grid3& g, std::uint64_t seed, int trials, const CutoffProfile& profile) {
  const std::string S = "littlewood_paley";
  s.guarded(S, "partition_of_unity", [&] {
    s.at_most(S, "partition_of_unity", partition_of_unity_defect(g, profile), 1e-12);
  });
  s.guarded(S, "blocks", [&] {
    const auto F = noise_field(g, seed + 10);
    s.at_most(S, "reconstruction", rel(l2_norm(lp_reconstruct(F, profile) - F), l2_norm(F)), 1e-10);
    s.at_most(S, "shell_support", shell_support_leak(F, profile), 0.0);
    const DyadicRange r = dyadic_range(g);
    double tele = 0.0, cover = 0.0;
    for (int k = r.j_min; k <= r.j_max; ++k) {
      SpectralVectorField acc = low_pass(F, k, profile);
      for (int j = k + 1; j <= r.j_max; ++j) acc += lp_project(F, j, profile);
      tele = std::max(tele, rel(l2_norm(acc - F), l2_norm(F)));
      cover = std::max(cover, rel(l2_norm(lp_project(tilde_block(F, k, profile), k, profile) - lp_project(F, k, profile)), l2_norm(F)));
    }
    s.at_most(S, "low_pass_telescoping", tele, 1e-10);
    s.at_most(S, "tilde_block_covering", cover, 1e-12);
  });
  s.guarded(S, "bony", [&] {
    const DyadicRange r = dyadic_range(g);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      const auto u = noise_field(g, seed + 100 + 2 * t), v = noise_field(g, seed + 101 + 2 * t);
      const auto prod = dealias(forward_transform(dot_product(inverse_transform(u), inverse_transform(v))));
      const double scale = l2_norm(prod);
      for (int j = r.j_min; j <= r.j_max; ++j)
        worst = std::max(worst, rel(l2_norm(bony_decompose(u, v, j).sum() - product_block(u, v, j)), scale));
    }
    s.at_most(S, "bony_reconstruction", worst, 1e-10, std::to_string(trials) + " random pairs");
  });
  s.guarded(S, "commutators", [&] {
    const auto gf = random_band_field(g, seed + 20, 1, 3), f = random_band_field(g, seed + 21, 1, 4);
    double ident = 0.0;
    for (int j = 0; j <= 2; ++j) {
      const auto lhs = commutator_curl(gf, f, j) + dealiased_cross(gf, curl(lp_project(f, j)));
      const auto rhs_ = lp_project(dealiased_cross(gf, curl(f)), j);
      ident = std::max(ident, rel(l2_norm(lhs - rhs_), l2_norm(dealiased_cross(gf, curl(f)))));
    }
    s.at_most(S, "commutator_identity", ident, 1e-12);
    SpectralVectorField constant(g);
    constant(0, 0) = 1.0;
    constant(1, 0) = -0.5;
    s.at_most(S, "commutator_constant_field", rel(l2_norm(commutator_curl(constant, f, 1)), l2_norm(curl(f))), 1e-12);
    double gain = 0.0;
    for (int j = 0; j <= 2; ++j) gain = std::max(gain, commutator_gain_ratio(gf, f, j));
    s.holds(S, "commutator_gain_constant_finite", std::isfinite(gain), gain, "fitted C");
  });
  s.guarded(S, "gevrey", [&] {
    const auto F = noise_field(g, seed + 30);
    const GevreyParams a{1.0, 0.1, 1.0}, b{1.0, 0.15, 1.0}, ab{1.0, 0.25, 1.0};
    s.at_most(S, "gevrey_semigroup", rel(l2_norm(gevrey_apply(gevrey_apply(F, a), b) - gevrey_apply(F, ab)), l2_norm(gevrey_apply(F, ab))), 1e-12);
    bool dominated = true;
    for (double lam : {0.0, 1e-6, 0.05, 0.3, 1.0})
      for (std::int32_t m = 0; m <= g.max_radial_index(); ++m) {
        const double x = lam * g.magnitude(m);
        if (e_operator_symbol(x) > std::exp(x)) dominated = false;
      }
    s.holds(S, "e_operator_dominated_by_gevrey", dominated);
    bool all = true;
    double worst = 0.0;
    for (double lam : {0.05, 0.3})
      for (double alpha : {0.5, 1.0})
        for (int b0 = 0; b0 <= 3; ++b0)
          for (int b1 = 0; b0 + b1 <= 3; ++b1)
            for (int b2 = 0; b0 + b1 + b2 <= 3; ++b2) {
              const auto d = derivative_bound_check(F, {alpha, lam, 1.0}, 0.5, {b0, b1, b2});
              all = all && d.holds;
              if (std::isfinite(d.rhs) && d.rhs > 0.0) worst = std::max(worst, d.lhs / d.rhs);
            }
    s.holds(S, "derivative_bound", all, worst, "max lhs/rhs");
  });
  s.guarded(S, "norm_equivalence", [&] {
    const auto F = noise_field(g, seed + 40);
    double lo = 1e300, hi = 0.0;
    for (double sigma : {-0.5, 0.0, 0.75, 1.5}) {
      const double r = dyadic_sobolev_norm(F, sigma) / sobolev_norm(F, sigma);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    s.holds(S, "dyadic_norm_equivalence", lo >= 0.5 && hi <= 2.0, std::max(hi, 1.0 / lo), "C < 2");
    const auto B = beltrami_field(g);
    s.at_most(S, "dyadic_norm_single_mode", std::abs(dyadic_sobolev_norm(B, 1.3) - sobolev_norm(B, 1.3)), 1e-14);
  });
  s.guarded(S, "bernstein", [&] {
    double worst = 0.0;
    bool ok = true;
    for (int t = 0; t < 3; ++t) {
      const auto F = lp_project(noise_field(g, seed + 50 + t), 2);
      for (auto [p, q] : {std::pair{2.0, 2.0}, {1.0, 2.0}, {2.0, INFINITY}}) {
        const auto r = bernstein_check(F, 2, p, q);
        ok = ok && r.within_brackets;
        worst = std::max({worst, r.gradient_ratio, 1.0 / r.gradient_ratio, r.lebesgue_ratio});
      }
    }
    s.holds(S, "bernstein_brackets", ok, worst, "ratios within [1/8, 8]");
  });
}

void dynamics_suite(Suite& s, const Grid3& g, std::uint64_t seed, int trials) {
  const std::string S = "dynamics";
  s.guarded(S, "beltrami", [&] {
    const auto B = beltrami_field(g);
    for (double sv : {-0.4, 0.0, 0.4}) {
      const ModelParams p{sv, 2.25, 1.0, 0.0};
      s.at_most(S, "beltrami_hall_vanishes_s" + std::to_string(sv).substr(0, 4), l2_norm(hall_nonlinearity(B, B, p)), 1e-12);
    }
    const ModelParams p{0.0, 2.25, 1.0, 0.0};
    s.at_most(S, "beltrami_rhs_is_minus_b", rel(l2_norm(rhs(B, B, p) + B), l2_norm(B)), 1e-12);
  });
  s.guarded(S, "cancellation", [&] {
    for (double sv : {-0.4, 0.0, 0.4}) {
      const ModelParams p{sv, 2.25, 1.0, 0.0};
      double worst = 0.0;
      for (int t = 0; t < trials; ++t) {
        const auto B = random_band_field(g, seed + 200 + t, 1, g.dealias_cutoff());
        const auto H = hall_nonlinearity(B, B, p);
        const auto LB = fractional_laplacian(B, -p.s);
        worst = std::max(worst, rel(std::abs(inner_product(H, LB)), l2_norm(H) * l2_norm(LB)));
      }
      s.at_most(S, "twisted_cancellation_s" + std::to_string(sv).substr(0, 4), worst, 1e-10);
    }
  });
  s.guarded(S, "structure", [&] {
    const ModelParams p{0.3, 2.0, 1.0, 0.0};
    const auto B = random_band_field(g, seed + 300, 1, 4), q = random_band_field(g, seed + 301, 1, 4);
    const auto H = hall_nonlinearity(B, q, p);
    s.at_most(S, "bilinearity", rel(l2_norm(hall_nonlinearity(2.0 * B, -3.0 * q, p) + 6.0 * H), 6.0 * l2_norm(H)), 1e-12);
    const auto R = rhs(B, q, p);
    s.at_most(S, "rhs_divergence_free", rel(max_abs(divergence(R)), max_abs(R) * g.max_magnitude()), 1e-12);
    s.at_most(S, "rhs_mean_free", mean_mode_magnitude(R), 1e-14);
    const ModelParams p0{0.0, 2.0, 1.0, 0.0};
    const auto H0 = hall_nonlinearity(B, B, p0);
    s.at_most(S, "s0_l2_orthogonality", rel(std::abs(inner_product(H0, B)), l2_norm(H0) * l2_norm(B)), 1e-10);
  });
  s.guarded(S, "admissibility", [&] {
    const bool ok = check_admissible({0.4, 1.5}) == Admissibility::theorem_range &&
                    check_admissible({0.0, 1.5}) == Admissibility::intro_range_only &&
                    check_admissible({0.0, 3.0}) == Admissibility::outside &&
                    std::abs(critical_exponent({0.4, 1.5}) - 1.6) < 1e-15;
    s.holds(S, "admissibility_labels", ok);
  });
}

void solver_suite(Suite& s, const Grid3& g, std::uint64_t seed, bool full) {
  const std::string S = "solvers";
  const ModelParams p{0.0, 2.25, 1.0, 0.0};
  s.guarded(S, "heat", [&] {
    const auto F = noise_field(g, seed + 400);
    const auto a = heat_semigroup(heat_semigroup(F, 0.03, p), 0.05, p), b = heat_semigroup(F, 0.08, p);
    s.at_most(S, "heat_semigroup_property", rel(l2_norm(a - b), l2_norm(b)), 1e-13);
    bool mono = true;
    for (double sigma : {-0.5, 0.0, 1.0, 2.0})
      mono = mono && sobolev_norm(b, sigma) <= sobolev_norm(F, sigma);
    s.holds(S, "heat_norms_nonincreasing", mono);
  });
  s.guarded(S, "beltrami_evolve", [&] {
    const auto B0 = beltrami_field(g);
    EvolveOptions keep;
    keep.keep_states = true;
    const RunRecord rec = evolve(B0, p, {1e-3, 1.0, Scheme::etd2rk, 100}, keep);
    const RunRecord dense = evolve(B0, p, {1e-3, 1.0, Scheme::etd2rk, 1}, {});
    double worst = 0.0;
    for (std::size_t i = 0; i < rec.size(); ++i)
      worst = std::max(worst, rel(l2_norm(rec.states[i] - std::exp(-rec.times[i]) * B0), std::exp(-rec.times[i]) * l2_norm(B0)));
    s.at_most(S, "beltrami_exact_decay", worst, 1e-8);
    const EnergyReport e = energy_balance(dense, p);
    s.at_most(S, "beltrami_energy_excursion", e.max_abs_residual, 1e-8);
  });
  s.guarded(S, "picard_beltrami", [&] {
    const auto B0 = beltrami_field(g);
    const PicardResult r = picard_solve(B0, p, {}, {1e-2, 0.2, Scheme::etd2rk, 1});
    s.holds(S, "picard_beltrami_one_iteration", r.trace.converged && r.trace.iterations() == 1 && r.trace.ratio[1] == 0.0,
            static_cast<double>(r.trace.iterations()));
  });
  s.guarded(S, "mild_beltrami", [&] {
    ModelParams pe = p;
    pe.eps_visc = 1e-2;
    const auto B0 = beltrami_field(g);
    const FrozenQ q({0.0}, {B0});
    MildSolveOptions o;
    o.dt = 1e-3;
    o.t_end = 0.1;
    const MildSolveResult r = linear_mild_solve(B0, q.provider(), pe, o);
    double worst = 0.0;
    for (std::size_t i = 0; i < r.times.size(); ++i) {
      const double exact = std::exp(-(1.0 + pe.eps_visc) * r.times[i]);
      worst = std::max(worst, rel(l2_norm(r.states[i] - exact * B0), exact * l2_norm(B0)));
    }
    s.at_most(S, "mild_solve_beltrami_decay", worst, 2.0 * o.dt * o.t_end, "first-order quadrature");
  });
  s.guarded(S, "determinism", [&] {
    const auto B0 = rescale_to_norm(random_band_field(g, seed + 500, 1, 4), p.sigma_c(), 1e-2);
    EvolveOptions keep;
    keep.keep_states = true;
    const StepperConfig st{1e-2, 0.1, Scheme::etd2rk, 5};
    const RunRecord a = evolve(B0, p, st, keep), b = evolve(B0, p, st, keep);
    bool same = a.l2 == b.l2;
    for (std::size_t i = 0; i < a.states.size() && same; ++i)
      same = std::equal(a.states[i].data().begin(), a.states[i].data().end(), b.states[i].data().begin());
    s.holds(S, "bit_identical_rerun", same);
  });
  if (!full) return;
  s.guarded(S, "orders", [&] {
    const auto B0 = rescale_to_norm(random_band_field(g, seed + 600, 1, 4), p.sigma_c(), 0.3);
    EvolveOptions keep;
    keep.keep_states = true;
    const double T = 0.1;
    const auto ref = evolve(B0, p, {T / 320, T, Scheme::etd2rk, 1 << 30}, keep).states.back();
    for (Scheme sc : {Scheme::etd1, Scheme::etd2rk}) {
      std::vector<double> dts, errs;
      for (double dt : {T / 10, T / 20, T / 40}) {
        dts.push_back(dt);
        errs.push_back(l2_norm(evolve(B0, p, {dt, T, sc, 1 << 30}, keep).states.back() - ref));
      }
      const double order = convergence_order(dts, errs);
      const double expected = sc == Scheme::etd1 ? 1.0 : 2.0;
      s.holds(S, "order_" + to_string(sc), order >= expected / 2.0 && order <= expected * 2.0, order,
              "expected " + std::to_string(static_cast<int>(expected)));
    }
  });
}

void diagnostics_suite(Suite& s, const Grid3& g, std::uint64_t seed) {
  const std::string S = "diagnostics";
  s.guarded(S, "gevrey_fit", [&] {
    const Grid3 g32(32);
    const auto shape = power_law_field(g32, seed + 700, 0.0, 1, g.max_magnitude());
    const auto synth = apply_radial_multiplier(shape, [](double k) { return std::exp(-0.3 * k); });
    const double l0 = gevrey_radius_fit(synth, 1.0).lambda_hat;
    s.at_most(S, "gevrey_fit_synthetic", std::abs(l0 - 0.3), 0.02);
    s.at_most(S, "gevrey_fit_flat", gevrey_radius_fit(shape, 1.0).lambda_hat, 0.02);
    const double l1 = gevrey_radius_fit(gevrey_apply(synth, {1.0, 0.1, 1.0}), 1.0).lambda_hat;
    s.at_most(S, "gevrey_fit_shift", std::abs(l1 - 0.2), 0.02);
  });
  s.guarded(S, "decay_fit", [&] {
    const ModelParams p{0.0, 2.0, 1.0, 0.0};
    NormSeries ns;
    for (int i = 0; i < 12; ++i) {
      const double t = 0.01 * std::pow(1.3, i);
      ns.times.push_back(t);
      ns.values.push_back(3.0 * std::pow(t, -0.505));
    }
    const DecayFit f = decay_fit_series(ns, p, 0, 0.01, {0.01, 0.2});
    s.at_most(S, "decay_fit_exact_power_law", std::abs(f.slope + 0.505), 1e-10);
  });
  s.guarded(S, "xt_norm", [&] {
    const ModelParams p{0.0, 2.0, 1.0, 0.0};
    const auto B = random_band_field(g, seed + 710, 1, 4);
    const double t = 0.3;
    const XTNorm x = xt_norm({t}, {B}, p, 1.0, 0.01, 0.5);
    const double direct = std::pow(t, 0.01 / 2.0) * gevrey_norm(B, {1.0, 0.5 * std::pow(t, 0.5), 0.5}, p.sigma_c() + 0.01);
    s.at_most(S, "xt_norm_single_snapshot", rel(std::abs(x.value - direct), direct), 1e-14);
  });
  s.guarded(S, "scaling_beltrami", [&] {
    const ModelParams p{0.2, 2.0, 1.0, 0.0};
    const ScalingReport r = scaling_symmetry_check(beltrami_field(g), p, 2, {1e-3, 0.02, Scheme::etd2rk, 1});
    s.at_most(S, "scaling_beltrami", r.discrepancy, 1e-8);
  });
}

void cli_suite(Suite& s) {
  const std::string S = "cli";
  s.guarded(S, "config", [&] {
    SimConfig c;
    c.grid_n = 24;
    c.model.s = 0.1234567890123;
    c.stepper.scheme = Scheme::etd1;
    c.seed = 99;
    c.spectral_slope = 2.75;
    c.output_dir = "out dir";
    const SimConfig back = parse_config(serialize_config(c));
    s.holds(S, "config_round_trip", back == c && serialize_config(back) == serialize_config(c));
    bool rejected = false;
    try {
      parse_config("grid.n = 16\nmodel.bogus = 1\n");
    } catch (const ConfigError& e) {
      rejected = e.line() == 2;
    }
    s.holds(S, "unknown_key_rejected_with_line", rejected);
  });
}

}  // namespace

bool VerifyReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

VerifyReport run_verify(const VerifyOptions& options, std::ostream* progress) {
  const auto start = clock_type::now();
  VerifyReport report;
  Suite s(report, progress);
  const bool full = options.level == VerifyLevel::full;
  const Grid3 g(full ? 32 : 16);
  spectral_suite(s, g, options.seed);
  lp_suite(s, g, options.seed, full ? 10 : 3, options.profile);
  dynamics_suite(s, g, options.seed, full ? 10 : 3);
  solver_suite(s, Grid3(16), options.seed, full);
  diagnostics_suite(s, g, options.seed);
  cli_suite(s);
  report.seconds = std::chrono::duration<double>(clock_type::now() - start).count();
  return report;
}

int cmd_verify(const VerifyOptions& options, std::ostream& out) {
  const VerifyReport r = run_verify(options, &out);
  std::size_t failed = 0;
  for (const auto& c : r.checks) failed += c.pass ? 0 : 1;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu checks, %zu failed, %.1f s\n", r.checks.size(), failed, r.seconds);
  out << buf;
  return r.all_pass() ? 0 : 1;
}

}  // namespace emhd
