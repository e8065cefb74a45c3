#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "emhd/field.hpp"
#include "emhd/gevrey.hpp"

namespace emhd {

/// Normalized bump-integral smoothstep: S(t) = int_0^t psi / int_0^1 psi with
/// psi(u) = exp(-1/(u(1-u))). S is 0 for t <= 0, 1 for t >= 1, and flat to
/// all orders at both ends.
double bump_smoothstep(double t);

/// Radial low-pass profile chi: 1 up to `plateau`, 0 from `support` on,
/// monotone and smooth in between. The dyadic ring geometry of the blocks
/// (3/4 * 2^j <= |k| <= 2^(j+1)) assumes the default constants.
struct CutoffProfile {
  double plateau = 0.75;
  double support = 1.0;

  double chi(double r) const;
  /// chi(r/2) - chi(r).
  double phi(double r) const;
};

/// chi with the default profile.
double chi_eval(double xi_mag);

/// Inclusive range of dyadic indices j whose blocks can touch the lattice.
/// The upper end covers every lattice point, so the blocks sum to the
/// identity on mean-free fields.
struct DyadicRange {
  int j_min;
  int j_max;
};
DyadicRange dyadic_range(const Grid3& grid);

/// Delta_j: multiplier phi(2^-j |k|).
template <int C>
SpectralField<C> lp_project(const SpectralField<C>& F, int j, const CutoffProfile& profile = {});

/// u_{<=k}: multiplier chi(2^-(k+1) |k|), the telescoped sum of Delta_j over
/// j <= k. Keeps the mean mode.
template <int C>
SpectralField<C> low_pass(const SpectralField<C>& F, int k, const CutoffProfile& profile = {});

/// Delta_{k-1} + Delta_k + Delta_{k+1}.
template <int C>
SpectralField<C> tilde_block(const SpectralField<C>& F, int k, const CutoffProfile& profile = {});

/// Sum of every block in the dyadic range.
template <int C>
SpectralField<C> lp_reconstruct(const SpectralField<C>& F, const CutoffProfile& profile = {});

/// Per-block L^2 masses ||Delta_j F||^2 and their H^sigma-weighted versions
/// 2^(2 sigma j) ||Delta_j F||^2.
struct ShellSpectrum {
  int j_min = 0;
  int j_max = -1;
  double sigma = 0.0;
  std::vector<double> masses;
  std::vector<double> weighted_masses;
};

ShellSpectrum shell_spectrum(const SpectralVectorField& F, double sigma = 0.0);

/// CSV with header `j,mass,sobolev_weighted_mass`.
void write_shell_csv(std::ostream& os, const ShellSpectrum& spectrum);

/// (sum_j 2^(2 sigma j) ||Delta_j F||^2)^(1/2).
double dyadic_sobolev_norm(const SpectralVectorField& F, double sigma);

/// Paraproduct pieces of Delta_j(u v): low-high, high-low and high-high
/// interactions. Vector inputs are combined with the dot product.
struct BonyTerms {
  SpectralScalarField low_high;
  SpectralScalarField high_low;
  SpectralScalarField high_high;

  SpectralScalarField sum() const;
};

/// Splits Delta_j of the dealiased product u v. Both inputs must be band
/// limited (ResolutionError otherwise).
template <int C>
BonyTerms bony_decompose(const SpectralField<C>& u, const SpectralField<C>& v, int j);

/// Delta_j of the dealiased product u v computed directly.
template <int C>
SpectralScalarField product_block(const SpectralField<C>& u, const SpectralField<C>& v, int j);

/// [Delta_j, g x curl] f = Delta_j(g x curl f) - g x curl(Delta_j f). With
/// `gevrey` set, Delta_j is replaced by Delta_j composed with the Gevrey
/// multiplier. Products are dealiased.
SpectralVectorField commutator_curl(const SpectralVectorField& g, const SpectralVectorField& f,
                                    int j, const std::optional<GevreyParams>& gevrey = std::nullopt);

/// [Delta_j, g] f = Delta_j(g f) - g Delta_j f.
SpectralScalarField commutator_scalar(const SpectralScalarField& g, const SpectralScalarField& f,
                                      int j);

/// ||[Delta_j, g x curl] f||_{L^2} / (2^-j ||grad g||_inf ||curl f||_{L^2}):
/// the constant in the one-derivative commutator gain. 0 when the
/// denominator vanishes.
double commutator_gain_ratio(const SpectralVectorField& g, const SpectralVectorField& f, int j,
                             const std::optional<GevreyParams>& gevrey = std::nullopt);

/// Same ratio for the scalar commutator.
double commutator_scalar_gain_ratio(const SpectralScalarField& g, const SpectralScalarField& f,
                                    int j);

struct BernsteinRatios {
  double gradient_ratio = 0.0;  // ||grad F||_p / (2^j ||F||_p)
  double lebesgue_ratio = 0.0;  // ||F||_q / (2^(3 (1/p - 1/q) j) ||F||_p)
  bool within_brackets = false;
};

/// Bernstein ratios for F supported in the ring 3/4 * 2^j <= |k| <= 2^(j+1).
/// L^p norms are volume-normalized; pass +inf for the sup norm. The gradient
/// ratio must lie in [1/8, 8] and the Lebesgue ratio must not exceed 8.
/// Throws PreconditionError on a zero field, a support violation, or q < p.
BernsteinRatios bernstein_check(const SpectralVectorField& F, int j, double p, double q);

/// Largest |sum_j phi(2^-j |k|) - 1| over nonzero lattice points, where each
/// point only sums the blocks whose nominal ring 3/4 * 2^j <= |k| <= 2^(j+1)
/// contains it. Any profile that leaks outside the nominal rings fails.
double partition_of_unity_defect(const Grid3& grid, const CutoffProfile& profile = {});

/// Largest coefficient of Delta_j F found outside its nominal ring (exact
/// zero expected), maximized over the dyadic range.
double shell_support_leak(const SpectralVectorField& F, const CutoffProfile& profile = {});

}  // namespace emhd
