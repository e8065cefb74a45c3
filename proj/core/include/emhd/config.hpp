#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emhd/diagnostics.hpp"
#include "emhd/field.hpp"
#include "emhd/model.hpp"
#include "emhd/picard.hpp"
#include "emhd/stepper.hpp"

namespace emhd {

/// Simulation configuration. The text form is one `key = value` pair per
/// line; `#` starts a comment. Keys:
///
///   grid.n  grid.box_length  grid.dealias_cutoff
///   model.s  model.kappa  model.mu  model.eps_visc
///   stepper.dt  stepper.t_end  stepper.scheme  stepper.snapshot_every
///   initial.kind  initial.amplitude  initial.seed  initial.band_lo
///   initial.band_hi  initial.spectral_slope  initial.checkpoint_path
///   diagnostics.alpha  diagnostics.delta  diagnostics.eps_rate
///   diagnostics.window_lo  diagnostics.window_hi  diagnostics.lambda_scale
///   picard.max_outer  picard.contraction_tol
///   output.dir
///
/// initial.kind is one of beltrami, random_band, power_law_spectrum or
/// checkpoint. For the random kinds the amplitude is the H^sigma_c norm of
/// the datum; for beltrami it multiplies (sin z, cos z, 0).
struct SimConfig {
  int grid_n = 32;
  double box_length = 6.283185307179586;
  std::optional<double> dealias_cutoff;

  ModelParams model{};
  StepperConfig stepper{};

  std::string initial_kind = "random_band";
  double amplitude = 1e-2;
  std::optional<std::uint64_t> seed;
  double band_lo = 1.0;
  double band_hi = 4.0;
  /// Coefficient decay exponent for power_law_spectrum; unset means
  /// sigma_c + 1.5, the borderline for a finite H^sigma_c norm.
  std::optional<double> spectral_slope;
  std::string checkpoint_path;

  double alpha = 1.0;
  double delta = 0.01;
  double eps_rate = 1.0;
  double window_lo = 0.01;
  double window_hi = 0.2;
  int lambda_scale = 2;

  PicardConfig picard{};
  std::string output_dir;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Every recognised key, in canonical order.
const std::vector<std::string>& config_keys();

/// Parses the text form. Throws ConfigError carrying the offending line.
SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const SimConfig& cfg);

/// Assigns one key from its text value (ConfigError on unknown keys or
/// malformed values). `line` only decorates error messages.
void set_config_value(SimConfig& cfg, std::string_view key, std::string_view value, int line = 0);

/// Cross-field checks (ConfigError with line 0).
void validate_config(const SimConfig& cfg);

Grid3 make_grid(const SimConfig& cfg);

/// Builds the initial datum described by the config.
SpectralVectorField make_initial_field(const SimConfig& cfg);

}  // namespace emhd
