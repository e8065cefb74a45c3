#include "emhd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "emhd/random_fields.hpp"
#include "emhd/spectral_ops.hpp"

namespace emhd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Gevrey fit: relative amplitude floor and width of the weight taper.
constexpr double kFitFloor = 1e-12;
constexpr double kTaperDecades = 4.0;

double simpson3(double t0, double t1, double t2, double f0, double f1, double f2) {
  const double h0 = t1 - t0, h1 = t2 - t1, h = h0 + h1;
  return h / 6.0 * ((2.0 - h1 / h0) * f0 + h * h / (h0 * h1) * f1 + (2.0 - h0 / h1) * f2);
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& f, std::size_t upto) {
  double s = 0.0;
  for (std::size_t i = 1; i <= upto; ++i) s += 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
  return s;
}

int verdict_rank(const std::string& v) {
  if (v == "bounded") return 0;
  if (v == "growing") return 1;
  return 2;
}

}  // namespace

void NormSeries::validate() const {
  if (times.size() != values.size()) throw ShapeError("NormSeries '" + label + "': length mismatch");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw ShapeError("NormSeries '" + label + "': times must increase strictly");
}

std::vector<double> least_squares(const std::vector<double>& X, std::size_t cols,
                                  const std::vector<double>& y, double* r_squared) {
  const std::size_t rows = y.size();
  if (cols == 0 || X.size() != rows * cols) throw ShapeError("least_squares: design shape mismatch");
  if (rows < cols) throw FitError("least_squares: fewer observations than unknowns");

  // Householder QR on a column-major copy.
  std::vector<double> A(rows * cols), b = y;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) A[c * rows + r] = X[r * cols + c];
  for (std::size_t c = 0; c < cols; ++c) {
    double* col = &A[c * rows];
    double norm = 0.0;
    for (std::size_t r = c; r < rows; ++r) norm += col[r] * col[r];
    norm = std::sqrt(norm);
    if (norm == 0.0) throw FitError("least_squares: rank-deficient design");
    const double alpha = col[c] > 0 ? -norm : norm;
    std::vector<double> v(rows - c);
    for (std::size_t r = c; r < rows; ++r) v[r - c] = col[r];
    v[0] -= alpha;
    double vv = 0.0;
    for (double x : v) vv += x * x;
    if (vv == 0.0) continue;
    auto reflect = [&](double* target) {
      double d = 0.0;
      for (std::size_t r = c; r < rows; ++r) d += v[r - c] * target[r];
      d = 2.0 * d / vv;
      for (std::size_t r = c; r < rows; ++r) target[r] -= d * v[r - c];
    };
    for (std::size_t k = c; k < cols; ++k) reflect(&A[k * rows]);
    reflect(b.data());
  }
  std::vector<double> coef(cols);
  for (std::size_t c = cols; c-- > 0;) {
    double s = b[c];
    for (std::size_t k = c + 1; k < cols; ++k) s -= A[k * rows + c] * coef[k];
    const double diag = A[c * rows + c];
    if (std::abs(diag) < 1e-300) throw FitError("least_squares: singular system");
    coef[c] = s / diag;
  }
  if (r_squared) {
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(rows);
    double ss_tot = 0.0, ss_res = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      double pred = 0.0;
      for (std::size_t c = 0; c < cols; ++c) pred += X[r * cols + c] * coef[c];
      ss_res += (y[r] - pred) * (y[r] - pred);
      ss_tot += (y[r] - mean) * (y[r] - mean);
    }
    *r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  }
  return coef;
}

double loglog_slope(const std::vector<double>& times, const std::vector<double>& values) {
  if (times.size() != values.size() || times.size() < 2)
    throw FitError("loglog_slope: need at least two samples");
  std::vector<double> X, y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || !(values[i] > 0.0))
      throw FitError("loglog_slope: samples must be positive");
    X.push_back(1.0);
    X.push_back(std::log(times[i]));
    y.push_back(std::log(values[i]));
  }
  return least_squares(X, 2, y)[1];
}

EnergyReport energy_balance(const RunRecord& record, const ModelParams& p) {
  const std::size_t n = record.times.size();
  if (n < 3) throw DataError("energy_balance needs at least three snapshots");
  if (record.l2.size() != n || record.dissipation.size() != n)
    throw DataError("energy_balance: record lacks L2 or dissipation series");

  EnergyReport rep;
  const auto& t = record.times;
  double max_d = 0.0;
  for (double d : record.dissipation) max_d = std::max(max_d, d);
  double min_width = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 2 < n; ++i) {
    const double e0 = record.l2[i] * record.l2[i];
    const double e2 = record.l2[i + 2] * record.l2[i + 2];
    const double integral = simpson3(t[i], t[i + 1], t[i + 2], record.dissipation[i],
                                     record.dissipation[i + 1], record.dissipation[i + 2]);
    const double width = t[i + 2] - t[i];
    min_width = std::min(min_width, width);
    const double r = (0.5 * (e2 - e0) + integral) / width;
    rep.mid_times.push_back(t[i + 1]);
    rep.residuals.push_back(r);
    rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(r));
    rep.max_positive_excursion = std::max(rep.max_positive_excursion, r);
    if (r > 0.0) ++rep.positive_intervals;
  }
  const double dt = record.stepper.dt;
  const double e_start = record.l2.front() * record.l2.front();
  const double rate_max = p.mu * std::pow(std::max(1.0, record.band_max_magnitude), p.kappa);
  rep.tolerance = dt * dt * rate_max * max_d + 1e-12 * e_start / min_width;
  rep.asserted = p.s == 0.0;
  rep.pass = !rep.asserted || rep.max_abs_residual <= rep.tolerance;
  return rep;
}

double convergence_order(const std::vector<double>& steps, const std::vector<double>& errors) {
  return loglog_slope(steps, errors);
}

GevreyFit gevrey_radius_fit(const SpectralVectorField& F, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw PreconditionError("gevrey_radius_fit: alpha must lie in (0, 1]");
  const Grid3& grid = F.grid();
  const int top = static_cast<int>(std::floor(grid.dealias_cutoff() + 1e-12));
  const int hi = top - 2;
  struct Shell {
    double amp = 0.0, pos = 0.0, mass = 0.0;
  };
  std::vector<Shell> shells(static_cast<std::size_t>(std::max(hi, 0)) + 1);
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const auto m = grid.radial_index(f);
    if (m == 0) continue;
    const long shell = std::lround(std::sqrt(static_cast<double>(m)));
    if (shell < 1 || shell > hi) continue;
    double a2 = 0.0;
    for (int c = 0; c < 3; ++c) a2 += std::norm(F(c, f));
    Shell& s = shells[static_cast<std::size_t>(shell)];
    s.mass += a2;
    const double a = std::sqrt(a2);
    const double pos = grid.magnitude(m);
    if (a > s.amp || (a == s.amp && a > 0.0 && pos < s.pos)) {
      s.amp = a;
      s.pos = pos;
    }
  }
  double peak = 0.0;
  for (int s = 1; s <= hi; ++s) peak = std::max(peak, shells[static_cast<std::size_t>(s)].amp);

  GevreyFit fit;
  fit.alpha = alpha;
  std::vector<double> X, y;
  for (int s = 1; s <= hi; ++s) {
    const Shell& sh = shells[static_cast<std::size_t>(s)];
    if (!(sh.mass > 0.0) || !(sh.amp > kFitFloor * peak)) continue;
    // Rows are scaled by a factor that is 1 above kFitFloor * 1e4 of the peak
    // and falls linearly in log-amplitude to 0 at the floor, so shells enter
    // and leave the fit continuously as the spectrum decays.
    const double w = std::min(1.0, std::log10(sh.amp / (kFitFloor * peak)) / kTaperDecades);
    X.push_back(w);
    X.push_back(w * std::log(sh.pos));
    X.push_back(-w * std::pow(sh.pos, alpha));
    y.push_back(w * std::log(sh.amp));
    if (fit.shells_used == 0) fit.shell_lo = s;
    fit.shell_hi = s;
    ++fit.shells_used;
  }
  if (fit.shells_used < 4)
    throw FitError("gevrey_radius_fit: only " + std::to_string(fit.shells_used) +
                   " usable shells (need 4)");
  const auto coef = least_squares(X, 3, y, &fit.r_squared);
  fit.lambda_raw = coef[2];
  fit.lambda_hat = std::max(coef[2], 0.0);
  return fit;
}

void fill_gevrey_fit(RunRecord& record, const SpectralVectorField& state, double alpha) {
  if (record.lambda_hat.empty()) return;
  try {
    const GevreyFit fit = gevrey_radius_fit(state, alpha);
    record.lambda_hat.back() = fit.lambda_hat;
    record.gevrey_r2.back() = fit.r_squared;
  } catch (const FitError&) {
    record.lambda_hat.back() = kNaN;
    record.gevrey_r2.back() = kNaN;
  }
}

GevreyRateReport gevrey_rate_check(const RunRecord& record, const ModelParams& p, double alpha) {
  GevreyRateReport rep;
  rep.slope_expected = alpha / p.kappa;
  for (std::size_t i = 0; i < record.times.size() && i < record.lambda_hat.size(); ++i) {
    if (record.times[i] <= 0.0 || !std::isfinite(record.lambda_hat[i])) continue;
    rep.times.push_back(record.times[i]);
    rep.lambda_hat.push_back(record.lambda_hat[i]);
  }
  if (rep.times.size() < 4) {
    rep.reason = "fewer than four snapshots carry a Gevrey fit (degenerate spectrum)";
    return rep;
  }
  const double t_end = rep.times.back();
  const double l_end = rep.lambda_hat.back();
  if (!(l_end > 0.0)) {
    rep.reason = "fitted radius at the final time is zero";
    return rep;
  }
  rep.applicable = true;
  rep.increasing = true;
  for (std::size_t i = 1; i < rep.lambda_hat.size(); ++i)
    if (!(rep.lambda_hat[i] > rep.lambda_hat[i - 1])) rep.increasing = false;

  std::size_t early = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    const double d = std::abs(std::log(rep.times[i] / (t_end / 100.0)));
    if (d < best) {
      best = d;
      early = i;
    }
  }
  rep.early_time = rep.times[early];
  rep.early_ratio = rep.lambda_hat[early] / l_end;

  std::vector<double> ts, ls;
  for (std::size_t i = 0; i < rep.times.size(); ++i)
    if (rep.times[i] >= t_end / 10.0 * (1.0 - 1e-12) && rep.lambda_hat[i] > 0.0) {
      ts.push_back(rep.times[i]);
      ls.push_back(rep.lambda_hat[i]);
    }
  if (ts.size() >= 2) {
    rep.slope = loglog_slope(ts, ls);
    rep.slope_within = std::abs(rep.slope / rep.slope_expected - 1.0) <= 0.3;
  }
  rep.pass = rep.increasing && rep.early_ratio < 0.05 && rep.slope_within;
  return rep;
}

XTNorm xt_norm(const std::vector<double>& times, const std::vector<SpectralVectorField>& states,
               const ModelParams& p, double alpha, double delta, double eps_rate) {
  if (times.size() != states.size()) throw ShapeError("xt_norm: times and states differ in length");
  XTNorm out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t <= 0.0) continue;
    GevreyParams g{alpha, eps_rate * std::pow(t, alpha / p.kappa), eps_rate};
    const double v = std::pow(t, delta / p.kappa) * gevrey_norm(states[i], g, p.sigma_c() + delta);
    if (v > out.value) {
      out.value = v;
      out.argmax_time = t;
    }
  }
  return out;
}

double lowest_shell_fraction(const SpectralVectorField& F, double sigma) {
  const Grid3& grid = F.grid();
  const auto weight = radial_table(grid, [sigma](double k) { return k == 0.0 ? 0.0 : std::pow(k, 2.0 * sigma); });
  double low = 0.0, total = 0.0;
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const auto m = grid.radial_index(f);
    if (m == 0) continue;
    double a2 = 0.0;
    for (int c = 0; c < 3; ++c) a2 += std::norm(F(c, f));
    a2 *= weight[static_cast<std::size_t>(m)];
    total += a2;
    if (m == 1) low += a2;
  }
  return total > 0.0 ? low / total : 0.0;
}

DecayFit decay_fit_series(const NormSeries& series, const ModelParams& p, int k_order,
                          double delta, std::pair<double, double> window) {
  series.validate();
  const auto [t_lo, t_hi] = window;
  if (!(t_lo > 0.0) || !(t_lo < t_hi))
    throw WindowError("decay window must satisfy 0 < t_lo < t_hi");
  if (t_hi > 0.2 / p.mu * (1.0 + 1e-12))
    throw WindowError("decay window ends after 0.2/mu, inside the spectral-gap regime");
  DecayFit fit;
  fit.k_order = k_order;
  fit.delta = delta;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.slope_expected = -(k_order + delta) / p.kappa;
  std::vector<double> ts, vs;
  for (std::size_t i = 0; i < series.times.size(); ++i)
    if (series.times[i] >= t_lo * (1 - 1e-12) && series.times[i] <= t_hi * (1 + 1e-12)) {
      ts.push_back(series.times[i]);
      vs.push_back(series.values[i]);
    }
  fit.points = static_cast<int>(ts.size());
  if (fit.points < 6)
    throw WindowError("decay window holds " + std::to_string(fit.points) + " snapshots (need 6)");
  fit.slope = loglog_slope(ts, vs);
  return fit;
}

DecayFit decay_fit(const std::vector<double>& times, const std::vector<SpectralVectorField>& states,
                   const ModelParams& p, int k_order, double delta, std::pair<double, double> window) {
  if (times.size() != states.size()) throw ShapeError("decay_fit: times and states differ in length");
  NormSeries series;
  series.label = "Lambda^k B in H^(sigma_c+delta)";
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < window.first * (1 - 1e-12) || t > window.second * (1 + 1e-12)) continue;
    const double sigma = p.sigma_c() + delta + k_order;
    if (lowest_shell_fraction(states[i], sigma) > 0.9)
      throw WindowError("decay window reaches the spectral-gap regime at t = " + std::to_string(t) +
                        " (the |k| = 1 modes carry over 90% of the fitted norm)");
    series.times.push_back(t);
    series.values.push_back(sobolev_norm(states[i], sigma));
  }
  return decay_fit_series(series, p, k_order, delta, window);
}

SpectralVectorField dilate(const SpectralVectorField& F, int lambda) {
  if (lambda < 1) throw PreconditionError("dilate: lambda must be a positive integer");
  const Grid3& g = F.grid();
  require_band_limited(F, "dilate");
  const Grid3 fine(lambda * g.n(), g.box_length(), lambda * g.dealias_cutoff());
  SpectralVectorField out(fine, F.is_real());
  const int N = fine.n();
  auto wrap = [N](int k) { return k < 0 ? k + N : k; };
  for (std::size_t f = 0; f < g.size(); ++f) {
    int i, j, l;
    g.unflatten(f, i, j, l);
    const std::size_t target = fine.flatten(wrap(lambda * g.wavenumber(i)), wrap(lambda * g.wavenumber(j)),
                                            wrap(lambda * g.wavenumber(l)));
    for (int c = 0; c < 3; ++c) out(c, target) = F(c, f);
  }
  return out;
}

ScalingReport scaling_symmetry_check(const SpectralVectorField& B0, const ModelParams& p,
                                     int lambda_scale, const StepperConfig& stepper) {
  if (lambda_scale < 2) throw PreconditionError("scaling check needs lambda_scale >= 2");
  const double lam = lambda_scale;
  const double amp = std::pow(lam, p.kappa + p.s - 2.0);
  ScalingReport rep;
  rep.lambda_scale = lambda_scale;
  rep.t_star = stepper.t_end;
  rep.dt = stepper.dt;

  StepperConfig coarse = stepper;
  coarse.t_end = std::pow(lam, p.kappa) * stepper.t_end;
  coarse.snapshot_every = std::numeric_limits<int>::max();
  EvolveOptions keep;
  keep.keep_states = true;
  const RunRecord a = evolve(B0, p, coarse, keep);

  StepperConfig fine_cfg = stepper;
  fine_cfg.snapshot_every = std::numeric_limits<int>::max();
  const RunRecord b = evolve(amp * dilate(B0, lambda_scale), p, fine_cfg, keep);

  const SpectralVectorField predicted = amp * dilate(a.states.back(), lambda_scale);
  const SpectralVectorField& actual = b.states.back();
  const double ref = l2_norm(actual);
  const double diff = l2_norm(predicted - actual);
  rep.discrepancy = ref > 0.0 ? diff / ref : diff;
  return rep;
}

StabilityReport stability_check(const SpectralVectorField& B0,
                                const SpectralVectorField& perturbation, double eta,
                                const ModelParams& p, const StepperConfig& stepper) {
  StabilityReport rep;
  rep.eta = eta;
  EvolveOptions keep;
  keep.keep_states = true;
  const RunRecord base = evolve(B0, p, stepper, keep);
  SpectralVectorField B2 = B0;
  const double pn = l2_norm(perturbation);
  if (pn > 0.0 && eta != 0.0) B2.add_scaled(eta / pn, perturbation);
  const RunRecord pert = evolve(B2, p, stepper, keep);

  rep.times = base.times;
  for (std::size_t i = 0; i < base.states.size(); ++i)
    rep.difference.push_back(l2_norm(pert.states[i] - base.states[i]));
  const double d0 = rep.difference.front();
  if (d0 == 0.0) {
    rep.pass = true;
    return rep;
  }
  std::vector<double> weight(pert.hs_sigma_c_half_kappa.size());
  for (std::size_t i = 0; i < weight.size(); ++i)
    weight[i] = pert.hs_sigma_c_half_kappa[i] * pert.hs_sigma_c_half_kappa[i];
  for (std::size_t i = 0; i < rep.difference.size(); ++i) {
    const double ratio = rep.difference[i] / d0;
    rep.growth_factor = std::max(rep.growth_factor, ratio);
    const double integral = trapezoid(rep.times, weight, i);
    if (ratio > 1.0 && integral > 0.0) rep.c_fit = std::max(rep.c_fit, std::log(ratio) / integral);
  }
  rep.final_ratio = rep.difference.back() / d0;
  rep.pass = rep.growth_factor <= 10.0;
  return rep;
}

SweepRow sweep_row(const SpectralVectorField& B0, double amplitude, const ModelParams& p,
                   const StepperConfig& stepper, const PicardConfig& picard) {
  SweepRow row;
  row.amplitude = amplitude;
  row.s = p.s;
  row.kappa = p.kappa;
  row.admissibility = to_string(check_admissible(p));
  auto sup_ratio = [](const RunRecord& r) {
    if (r.hs_sigma_c.empty() || r.hs_sigma_c.front() == 0.0) return 0.0;
    double m = 0.0;
    for (double x : r.hs_sigma_c) m = std::max(m, x);
    return m / r.hs_sigma_c.front();
  };
  try {
    const RunRecord rec = evolve(B0, p, stepper);
    row.status = to_string(RunStatus::completed);
    row.sup_critical_ratio = sup_ratio(rec);
    row.verdict = row.sup_critical_ratio <= 2.0 ? "bounded" : "growing";
  } catch (const BlowUpError& e) {
    row.status = to_string(RunStatus::blew_up);
    row.verdict = "blew_up";
    if (e.partial()) row.sup_critical_ratio = sup_ratio(*e.partial());
    return row;
  }
  auto worst_ratio = [](const ConvergenceTrace& t) {
    double m = 0.0;
    for (std::size_t i = 1; i < t.ratio.size(); ++i)
      if (i >= 2 || t.ratio.size() == 2) m = std::max(m, t.ratio[i]);
    return m;
  };
  try {
    const PicardResult pr = picard_solve(B0, p, picard, stepper);
    row.contraction_ratio = worst_ratio(pr.trace);
  } catch (const DivergenceError& e) {
    row.status = to_string(RunStatus::diverged);
    row.contraction_ratio = e.trace() ? worst_ratio(*e.trace()) : kNaN;
  }
  return row;
}

bool verdicts_non_monotone(const std::vector<SweepRow>& rows) {
  std::vector<const SweepRow*> sorted;
  for (const auto& r : rows) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SweepRow* a, const SweepRow* b) { return a->amplitude < b->amplitude; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (verdict_rank(sorted[i]->verdict) < verdict_rank(sorted[i - 1]->verdict)) return true;
  return false;
}

SweepTable smallness_sweep(const SpectralVectorField& shape, const std::vector<double>& amplitudes,
                           const ModelParams& p, const StepperConfig& stepper,
                           const PicardConfig& picard) {
  SweepTable table;
  for (double a : amplitudes) {
    SpectralVectorField B0 = a == 0.0 ? SpectralVectorField(shape.grid()) : rescale_to_norm(shape, p.sigma_c(), a);
    table.rows.push_back(sweep_row(B0, a, p, stepper, picard));
  }
  table.non_monotone = verdicts_non_monotone(table.rows);
  return table;
}

}  // namespace emhd
