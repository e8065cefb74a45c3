#pragma once

#include <string>
#include <utility>
#include <vector>

#include "emhd/gevrey.hpp"
#include "emhd/picard.hpp"
#include "emhd/stepper.hpp"

namespace emhd {

/// A labelled scalar time series.
struct NormSeries {
  std::vector<double> times;
  std::vector<double> values;
  std::string label;

  /// Throws ShapeError on unequal lengths or non-increasing times.
  void validate() const;
};

/// Ordinary least-squares fit of y against the columns of X (row-major,
/// `cols` per row). Returns the coefficients and sets r_squared.
std::vector<double> least_squares(const std::vector<double>& X, std::size_t cols,
                                  const std::vector<double>& y, double* r_squared = nullptr);

/// Slope of log(values) against log(times).
double loglog_slope(const std::vector<double>& times, const std::vector<double>& values);

// ---------------------------------------------------------------- energy

/// Energy law 1/2 dE/dt + D = 0 with E = ||B||^2 and D the dissipation
/// series, checked on consecutive snapshot triples: each residual is
/// [(E(t_{i+2}) - E(t_i))/2 + Simpson integral of D] / (t_{i+2} - t_i).
struct EnergyReport {
  std::vector<double> mid_times;
  std::vector<double> residuals;
  double max_abs_residual = 0.0;
  double max_positive_excursion = 0.0;
  double tolerance = 0.0;
  /// The law is only asserted for s = 0; otherwise `pass` is true and the
  /// sign profile is informational.
  bool asserted = false;
  bool pass = false;
  int positive_intervals = 0;
};

/// Throws DataError with fewer than three snapshots.
EnergyReport energy_balance(const RunRecord& record, const ModelParams& p);

/// Least-squares order of `errors` against `steps` on log-log axes.
double convergence_order(const std::vector<double>& steps, const std::vector<double>& errors);

// ---------------------------------------------------------------- Gevrey

/// Fit of log A(k) = a + b log k - lambda k^alpha over unit-width radial
/// shells. A(k) is the largest coefficient magnitude in the shell, placed
/// at its own |k|. The top two shells below the dealias cutoff are
/// excluded, as are empty shells and shells whose amplitude is below 1e-12
/// of the largest one. Shells within four decades of that floor
/// enter the least-squares fit with reduced weight.
struct GevreyFit {
  double lambda_hat = 0.0;  // max(lambda, 0)
  double lambda_raw = 0.0;
  double r_squared = 0.0;
  double alpha = 1.0;
  int shell_lo = 0;
  int shell_hi = 0;
  int shells_used = 0;
};

/// Throws FitError with fewer than four usable shells.
GevreyFit gevrey_radius_fit(const SpectralVectorField& F, double alpha);

struct GevreyRateReport {
  bool applicable = false;
  std::string reason;
  std::vector<double> times;
  std::vector<double> lambda_hat;
  bool increasing = false;
  double early_time = 0.0;
  double early_ratio = 0.0;  // lambda_hat(t_end/100) / lambda_hat(t_end)
  double slope = 0.0;        // over [t_end/10, t_end]
  double slope_expected = 0.0;
  bool slope_within = false;  // |slope / expected - 1| <= 0.3
  bool pass = false;
};

/// Growth of the fitted radius along a record whose lambda_hat series is
/// filled. A record without usable fits is reported as not applicable.
GevreyRateReport gevrey_rate_check(const RunRecord& record, const ModelParams& p, double alpha);

/// Fills record.lambda_hat / gevrey_r2 for one state (NaN on FitError).
void fill_gevrey_fit(RunRecord& record, const SpectralVectorField& state, double alpha);

/// sup over snapshots with t > 0 of t^(delta/kappa) times the Gevrey norm
/// at radius eps_rate t^(alpha/kappa) and regularity sigma_c + delta.
struct XTNorm {
  double value = 0.0;
  double argmax_time = 0.0;
};

XTNorm xt_norm(const std::vector<double>& times, const std::vector<SpectralVectorField>& states,
               const ModelParams& p, double alpha, double delta, double eps_rate);

// ---------------------------------------------------------------- decay

struct DecayFit {
  int k_order = 0;
  double delta = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double slope = 0.0;
  double slope_expected = 0.0;  // -(k + delta) / kappa
  int points = 0;
};

/// Fraction of the squared H^sigma mass carried by the |k| = 1 lattice modes.
double lowest_shell_fraction(const SpectralVectorField& F, double sigma = 0.0);

/// Regression core: slope of log(values) vs log(times) inside the window.
/// Throws WindowError on a malformed window, t_hi > 0.2 / mu, or fewer than
/// six samples inside.
DecayFit decay_fit_series(const NormSeries& series, const ModelParams& p, int k_order,
                          double delta, std::pair<double, double> window);

/// Fits ||Lambda^k B(t)||_{H^(sigma_c + delta)} over the window. Also throws
/// WindowError when, for some state inside, the |k| = 1 modes carry more than
/// 90% of the fitted norm (spectral-gap regime).
DecayFit decay_fit(const std::vector<double>& times, const std::vector<SpectralVectorField>& states,
                   const ModelParams& p, int k_order, double delta, std::pair<double, double> window);

// ---------------------------------------------------------------- scaling

/// Fourier coefficients of F(lambda x) on the grid with lambda n points per
/// axis: the coefficient at k moves to lambda k.
SpectralVectorField dilate(const SpectralVectorField& F, int lambda);

struct ScalingReport {
  int lambda_scale = 2;
  double t_star = 0.0;
  double dt = 0.0;
  double discrepancy = 0.0;  // relative L^2
};

/// Runs B0 on its grid to lambda^kappa t_star and the rescaled datum
/// lambda^(kappa+s-2) B0(lambda x) on the refined grid to t_star, both with
/// stepper.dt, and compares the rescaled first solution with the second.
/// t_star is stepper.t_end.
ScalingReport scaling_symmetry_check(const SpectralVectorField& B0, const ModelParams& p,
                                     int lambda_scale, const StepperConfig& stepper);

// ---------------------------------------------------------------- stability

struct StabilityReport {
  double eta = 0.0;
  std::vector<double> times;
  std::vector<double> difference;  // ||B2(t) - B1(t)||
  double growth_factor = 0.0;      // max_t ||Bbar(t)|| / ||Bbar(0)||
  double final_ratio = 0.0;        // ||Bbar(T)|| / ||Bbar(0)||
  double c_fit = 0.0;              // smallest C in the Gronwall bound
  bool pass = false;               // growth_factor <= 10
};

/// Evolves B0 and B0 + eta * perturbation and tracks their L^2 difference.
/// `perturbation` is normalized to unit L^2 norm first.
StabilityReport stability_check(const SpectralVectorField& B0,
                                const SpectralVectorField& perturbation, double eta,
                                const ModelParams& p, const StepperConfig& stepper);

// ---------------------------------------------------------------- sweeps

struct SweepRow {
  double amplitude = 0.0;
  double s = 0.0;
  double kappa = 0.0;
  std::string admissibility;
  std::string status;  // completed | blew_up | diverged
  double sup_critical_ratio = 0.0;
  double contraction_ratio = 0.0;
  std::string verdict;  // bounded | growing | blew_up
};

struct SweepTable {
  std::vector<SweepRow> rows;
  bool non_monotone = false;
};

/// Rescales `shape` to each H^sigma_c amplitude, evolves to stepper.t_end
/// and runs a short Picard iteration. Blow-ups become rows.
SweepTable smallness_sweep(const SpectralVectorField& shape, const std::vector<double>& amplitudes,
                           const ModelParams& p, const StepperConfig& stepper,
                           const PicardConfig& picard);

/// One sweep row for an already-scaled datum.
SweepRow sweep_row(const SpectralVectorField& B0, double amplitude, const ModelParams& p,
                   const StepperConfig& stepper, const PicardConfig& picard);

/// Flags verdict sequences that are not monotone in amplitude.
bool verdicts_non_monotone(const std::vector<SweepRow>& rows);

}  // namespace emhd
