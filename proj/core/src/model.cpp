#include "emhd/model.hpp"

#include <cmath>

#include "emhd/spectral_ops.hpp"

namespace emhd {

void ModelParams::validate() const {
  if (!(mu > 0.0)) throw PreconditionError("mu must be positive");
  if (!(kappa > 0.0)) throw PreconditionError("kappa must be positive");
  if (!(eps_visc >= 0.0)) throw PreconditionError("eps_visc must be nonnegative");
  if (!std::isfinite(s)) throw PreconditionError("s must be finite");
}

double critical_exponent(const ModelParams& p) noexcept { return p.sigma_c(); }

Admissibility check_admissible(const ModelParams& p) noexcept {
  if (p.s > -0.5 && p.s < 0.5 && p.kappa > 2.0 - 2.0 * p.s && p.kappa < 2.5 - p.s)
    return Admissibility::theorem_range;
  if (p.kappa > 1.0 && p.kappa < 2.0) return Admissibility::intro_range_only;
  return Admissibility::outside;
}

std::string to_string(Admissibility a) {
  switch (a) {
    case Admissibility::theorem_range: return "theorem_range";
    case Admissibility::intro_range_only: return "intro_range_only";
    case Admissibility::outside: return "outside";
  }
  return "outside";
}

double linear_decay_rate(const ModelParams& p, double k) noexcept {
  if (k == 0.0) return 0.0;
  double rate = p.mu * std::pow(k, p.kappa);
  if (p.eps_visc != 0.0) rate += p.eps_visc * k * k * k * k;
  return rate;
}

SpectralVectorField hall_nonlinearity(const SpectralVectorField& B, const SpectralVectorField& q,
                                      const ModelParams& p) {
  require_same_grid(B, q, "hall_nonlinearity");
  if (q.is_zero()) return SpectralVectorField(B.grid(), B.is_real() && q.is_real());
  require_band_limited(B, "hall_nonlinearity");
  require_band_limited(q, "hall_nonlinearity");
  const SpectralVectorField J = curl(fractional_laplacian(B, -p.s));
  SpectralVectorField out = curl(dealiased_cross(J, q));
  out *= -1.0;
  return out;
}

SpectralVectorField rhs(const SpectralVectorField& B, const SpectralVectorField& q,
                        const ModelParams& p) {
  SpectralVectorField out = hall_nonlinearity(B, q, p);
  const auto table = radial_table(B.grid(), [&p](double k) { return -linear_decay_rate(p, k); });
  out += apply_radial_table(B, table);
  return out;
}

}  // namespace emhd
