#pragma once

#include <array>

#include "emhd/field.hpp"

namespace emhd {

/// Gevrey class parameters: multiplier exp(lambda |k|^alpha).
/// `epsilon_rate` is the prefactor of the radius law lambda(t) = eps t^(alpha/kappa).
struct GevreyParams {
  double alpha = 1.0;
  double lambda = 0.0;
  double epsilon_rate = 1.0;

  /// Throws PreconditionError unless alpha lies in (0, 1] and lambda >= 0.
  void validate() const;
};

/// Largest allowed lambda * |k_max|^alpha, with |k_max| the largest lattice
/// magnitude. exp overflows a double near 709.
inline constexpr double kGevreyExponentGuard = 600.0;

/// Throws RadiusError when p exceeds the overflow guard on `grid`.
void check_gevrey_guard(const Grid3& grid, const GevreyParams& p);

/// Multiplies each coefficient by exp(lambda |k|^alpha).
template <int C>
SpectralField<C> gevrey_apply(const SpectralField<C>& F, const GevreyParams& p);

/// (exp(x) - 1) / x with x = lambda |k|^alpha; equals 1 at x = 0.
double e_operator_symbol(double x);

/// Multiplies each coefficient by the integral over tau in [0,1] of
/// exp(tau lambda |k|^alpha).
template <int C>
SpectralField<C> e_operator_apply(const SpectralField<C>& F, const GevreyParams& p);

/// || gevrey_apply(F, p) ||_{H^sigma}.
template <int C>
double gevrey_norm(const SpectralField<C>& F, const GevreyParams& p, double sigma);

struct DerivativeBound {
  double lhs = 0.0;  // || d^beta F ||_{H^sigma}
  double rhs = 0.0;  // (beta! / (lambda alpha)^|beta|)^(1/alpha) ||F||_{G^lambda_{alpha,sigma}}
  bool holds = false;
};

/// Evaluates both sides of the Gevrey derivative bound on the lattice. The
/// right side is +inf when lambda = 0 and beta != 0. `holds` allows a
/// relative slack of 1e-10.
DerivativeBound derivative_bound_check(const SpectralVectorField& F, const GevreyParams& p,
                                       double sigma, std::array<int, 3> beta);

}  // namespace emhd
