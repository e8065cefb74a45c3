#include "emhd/gevrey.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "emhd/spectral_ops.hpp"

namespace emhd {

void GevreyParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw PreconditionError("Gevrey order alpha must lie in (0, 1], got " + std::to_string(alpha));
  if (!(lambda >= 0.0))
    throw PreconditionError("Gevrey radius lambda must be nonnegative, got " + std::to_string(lambda));
}

void check_gevrey_guard(const Grid3& grid, const GevreyParams& p) {
  p.validate();
  const double exponent = p.lambda * std::pow(grid.max_magnitude(), p.alpha);
  if (exponent > kGevreyExponentGuard)
    throw RadiusError("Gevrey exponent lambda*|k_max|^alpha = " + std::to_string(exponent) +
                      " exceeds the overflow guard " + std::to_string(kGevreyExponentGuard));
}

template <int C>
SpectralField<C> gevrey_apply(const SpectralField<C>& F, const GevreyParams& p) {
  check_gevrey_guard(F.grid(), p);
  if (p.lambda == 0.0) return F;
  return apply_radial_multiplier(
      F, [&p](double k) { return std::exp(p.lambda * std::pow(k, p.alpha)); });
}

double e_operator_symbol(double x) {
  if (std::abs(x) < 1e-4) return 1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0;
  return std::expm1(x) / x;
}

template <int C>
SpectralField<C> e_operator_apply(const SpectralField<C>& F, const GevreyParams& p) {
  check_gevrey_guard(F.grid(), p);
  if (p.lambda == 0.0) return F;
  return apply_radial_multiplier(
      F, [&p](double k) { return e_operator_symbol(p.lambda * std::pow(k, p.alpha)); });
}

template <int C>
double gevrey_norm(const SpectralField<C>& F, const GevreyParams& p, double sigma) {
  return sobolev_norm(gevrey_apply(F, p), sigma);
}

DerivativeBound derivative_bound_check(const SpectralVectorField& F, const GevreyParams& p,
                                       double sigma, std::array<int, 3> beta) {
  const Grid3& grid = F.grid();
  check_gevrey_guard(grid, p);
  for (int b : beta)
    if (b < 0) throw PreconditionError("derivative_bound_check: negative multi-index entry");
  if (sigma < 0.0) require_mean_free(F, "derivative_bound_check");

  const int order = beta[0] + beta[1] + beta[2];
  const double scale = grid.wavenumber_scale();
  double sum = 0.0;
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const auto m = grid.radial_index(f);
    if (m == 0 && (order > 0 || sigma != 0.0)) continue;
    int idx[3];
    grid.unflatten(f, idx[0], idx[1], idx[2]);
    double symbol = m == 0 ? 1.0 : std::pow(grid.magnitude(m), sigma);
    for (int a = 0; a < 3; ++a) {
      if (beta[a] == 0) continue;
      const int kw = beta[a] % 2 ? grid.derivative_wavenumber(idx[a]) : grid.wavenumber(idx[a]);
      symbol *= std::pow(std::abs(scale * kw), beta[a]);
    }
    for (int c = 0; c < 3; ++c) sum += symbol * symbol * std::norm(F(c, f));
  }

  DerivativeBound out;
  out.lhs = std::sqrt(sum);
  const double gnorm = gevrey_norm(F, p, sigma);
  if (order == 0) {
    out.rhs = gnorm;
  } else if (p.lambda == 0.0) {
    out.rhs = std::numeric_limits<double>::infinity();
  } else {
    double log_fact = 0.0;
    for (int b : beta) log_fact += std::lgamma(b + 1.0);
    const double log_factor = (log_fact - order * std::log(p.lambda * p.alpha)) / p.alpha;
    out.rhs = std::exp(log_factor) * gnorm;
  }
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-10) + 1e-300;
  return out;
}

#define EMHD_INSTANTIATE(C)                                                                  \
  template SpectralField<C> gevrey_apply<C>(const SpectralField<C>&, const GevreyParams&);     \
  template SpectralField<C> e_operator_apply<C>(const SpectralField<C>&, const GevreyParams&); \
  template double gevrey_norm<C>(const SpectralField<C>&, const GevreyParams&, double);
EMHD_INSTANTIATE(1)
EMHD_INSTANTIATE(3)
#undef EMHD_INSTANTIATE

}  // namespace emhd
