#pragma once

#include <functional>
#include <string>
#include <vector>

#include "emhd/field.hpp"
#include "emhd/model.hpp"

namespace emhd {

enum class Scheme { etd1, etd2rk };

std::string to_string(Scheme s);
/// Throws PreconditionError on an unknown name.
Scheme scheme_from_string(const std::string& name);

struct StepperConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  Scheme scheme = Scheme::etd2rk;
  int snapshot_every = 1;

  /// Throws PreconditionError unless 0 < dt < t_end and snapshot_every >= 1.
  void validate() const;

  friend bool operator==(const StepperConfig&, const StepperConfig&) = default;
};

/// Field the nonlinearity is tested against at time t. `stage_state` is the
/// state being advanced (the self-coupled flow returns it unchanged).
using QProvider =
    std::function<const SpectralVectorField&(double t, const SpectralVectorField& stage_state)>;

/// Piecewise-constant interpolation of a q trajectory: on [t_m, t_{m+1}) the
/// value q_m is used, and q_{m+1} from t_{m+1} on.
class FrozenQ {
 public:
  FrozenQ(std::vector<double> times, std::vector<SpectralVectorField> states);

  const SpectralVectorField& at(double t) const;
  QProvider provider() const;
  const std::vector<double>& times() const noexcept { return times_; }

 private:
  std::vector<double> times_;
  std::vector<SpectralVectorField> states_;
};

/// Multiplies each coefficient by exp(-(mu |k|^kappa + eps_visc |k|^4) t).
SpectralVectorField heat_semigroup(const SpectralVectorField& B, double t, const ModelParams& p);

/// (e^z - 1)/z and (e^z - 1 - z)/z^2, with Taylor branches near 0.
double etd_phi1(double z);
double etd_phi2(double z);

/// Advances B from time t by dt. The result is Leray-projected and dealiased.
/// Throws BlowUpError when the new state is non-finite or its L^2 norm
/// exceeds 1e12.
SpectralVectorField etd_step(const SpectralVectorField& B, double t, double dt,
                             const QProvider& q, const ModelParams& p, Scheme scheme);

inline constexpr double kBlowUpThreshold = 1e12;

enum class RunStatus { completed, blew_up, diverged };
std::string to_string(RunStatus s);

/// Time series of one simulation. Norm series share the `times` axis.
/// `dissipation` is mu ||B||^2_{H^(kappa/2)} + eps_visc ||B||^2_{H^2}.
/// `lambda_hat` and `gevrey_r2` are filled by observers and hold NaN where
/// no fit was made. `states` is filled only when requested.
struct RunRecord {
  ModelParams params;
  StepperConfig stepper;
  std::string config_text;
  /// Largest |k| inside the dealias band of the grid the run used.
  double band_max_magnitude = 0.0;

  std::vector<double> times;
  std::vector<long> steps;
  std::vector<double> l2;
  std::vector<double> hs_sigma_c;
  std::vector<double> hs_sigma_c_half_kappa;
  std::vector<double> h_half_kappa;
  std::vector<double> dissipation;
  std::vector<double> lambda_hat;
  std::vector<double> gevrey_r2;
  std::vector<SpectralVectorField> states;

  RunStatus status = RunStatus::completed;
  double status_time = 0.0;

  std::size_t size() const noexcept { return times.size(); }
};

struct EvolveOptions {
  /// Empty: self-coupled flow. Otherwise the frozen-q linear flow.
  QProvider frozen_q;
  bool keep_states = false;
  /// Called after each snapshot's norms are appended.
  std::function<void(RunRecord&, const SpectralVectorField& state)> observer;
};

/// Steps B0 from 0 to stepper.t_end (a shorter last step lands exactly on
/// t_end). Snapshots are taken at step 0, every `snapshot_every` steps and
/// at the final step. Requires a mean-free, divergence-free B0. On blow-up
/// the BlowUpError carries the partial record.
RunRecord evolve(const SpectralVectorField& B0, const ModelParams& p, const StepperConfig& stepper,
                 const EvolveOptions& options = {});

/// Number of steps evolve takes for a config (counting the short last step).
long step_count(const StepperConfig& stepper);
/// Time reached after step m.
double step_time(const StepperConfig& stepper, long m);

}  // namespace emhd
