#pragma once

#include <string>

#include "emhd/field.hpp"

namespace emhd {

/// Parameters of B_t + mu Lambda^kappa B + eps_visc Lambda^4 B
///   + curl((curl Lambda^-s B) x q) = 0.
struct ModelParams {
  double s = 0.0;
  double kappa = 2.0;
  double mu = 1.0;
  double eps_visc = 0.0;

  /// 3.5 - s - kappa.
  double sigma_c() const noexcept { return 3.5 - s - kappa; }

  /// Throws PreconditionError on mu <= 0, kappa <= 0 or eps_visc < 0.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

double critical_exponent(const ModelParams& p) noexcept;

/// theorem_range: -1/2 < s < 1/2 and 2 - 2s < kappa < 2.5 - s.
/// intro_range_only: 1 < kappa < 2 but outside the theorem range.
/// outside: neither.
enum class Admissibility { theorem_range, intro_range_only, outside };

Admissibility check_admissible(const ModelParams& p) noexcept;
std::string to_string(Admissibility a);

/// mu |k|^kappa + eps_visc |k|^4 at physical wavenumber magnitude k.
double linear_decay_rate(const ModelParams& p, double k) noexcept;

/// -curl(dealias((curl Lambda^-s B) x q)). Returns zero when q is zero.
/// Throws MeanModeError when s > 0 and B has a mean, ShapeError on grid
/// mismatch and ResolutionError when an input leaves the dealiased band.
SpectralVectorField hall_nonlinearity(const SpectralVectorField& B, const SpectralVectorField& q,
                                      const ModelParams& p);

/// -mu Lambda^kappa B - eps_visc Lambda^4 B + hall_nonlinearity(B, q, p).
SpectralVectorField rhs(const SpectralVectorField& B, const SpectralVectorField& q,
                        const ModelParams& p);

}  // namespace emhd
