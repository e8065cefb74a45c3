#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "emhd/fft.hpp"
#include "emhd/field.hpp"

namespace emhd {

/// Values of `fn(|k|)` for every integer |k|^2 in [0, grid.max_radial_index()].
template <class Fn>
std::vector<double> radial_table(const Grid3& grid, Fn&& fn) {
  std::vector<double> table(static_cast<std::size_t>(grid.max_radial_index()) + 1);
  for (std::int32_t m = 0; m <= grid.max_radial_index(); ++m)
    table[static_cast<std::size_t>(m)] = fn(grid.magnitude(m));
  return table;
}

/// Multiplies each coefficient by table[|k|^2].
template <int C>
SpectralField<C> apply_radial_table(const SpectralField<C>& F, const std::vector<double>& table) {
  SpectralField<C> out = F;
  const Grid3& grid = F.grid();
  for (int c = 0; c < C; ++c) {
    auto comp = out.component(c);
    for (std::size_t i = 0; i < comp.size(); ++i)
      comp[i] *= table[static_cast<std::size_t>(grid.radial_index(i))];
  }
  return out;
}

/// Fourier multiplier m(|k|), evaluated once per distinct |k|.
template <int C, class Fn>
SpectralField<C> apply_radial_multiplier(const SpectralField<C>& F, Fn&& fn) {
  return apply_radial_table(F, radial_table(F.grid(), std::forward<Fn>(fn)));
}

/// Lambda^beta: multiplies by |k|^beta. The k=0 coefficient maps to 0 for
/// beta > 0 and is untouched for beta == 0. Negative beta requires a
/// mean-free field (MeanModeError otherwise).
template <int C>
SpectralField<C> fractional_laplacian(const SpectralField<C>& F, double beta);

/// i k x F(k).
SpectralVectorField curl(const SpectralVectorField& F);

/// i k . F(k).
SpectralScalarField divergence(const SpectralVectorField& F);

/// i k f(k).
SpectralVectorField gradient(const SpectralScalarField& f);

/// (I - k k^T / |k|^2) F(k) for k != 0; the mean mode is left alone.
SpectralVectorField leray_project(const SpectralVectorField& F);

/// Zeroes every mode with some |k_i| above the grid's dealias cutoff.
template <int C>
SpectralField<C> dealias(const SpectralField<C>& F);

/// Largest coefficient magnitude outside the dealias band.
template <int C>
double out_of_band_magnitude(const SpectralField<C>& F);

/// Throws ResolutionError when F has content outside the dealias band
/// above `rel_tol` times its largest coefficient.
template <int C>
void require_band_limited(const SpectralField<C>& F, const char* op, double rel_tol = 1e-13);

PhysicalVectorField cross_product(const PhysicalVectorField& F, const PhysicalVectorField& G);
PhysicalScalarField dot_product(const PhysicalVectorField& F, const PhysicalVectorField& G);
PhysicalScalarField multiply(const PhysicalScalarField& f, const PhysicalScalarField& g);

/// dealias(F(a x b)) with both factors synthesized on the grid.
SpectralVectorField dealiased_cross(const SpectralVectorField& a, const SpectralVectorField& b);

/// (sum_k |k|^(2 sigma) |F(k)|^2)^(1/2). Negative sigma requires a mean-free field.
template <int C>
double sobolev_norm(const SpectralField<C>& F, double sigma);

/// (sum_k |F(k)|^2)^(1/2); equals the mean-square physical norm by Parseval.
template <int C>
double l2_norm(const SpectralField<C>& F);

/// Re sum_k conj(F(k)) . G(k).
template <int C>
double inner_product(const SpectralField<C>& F, const SpectralField<C>& G);

/// (mean over grid of |f|^2)^(1/2).
template <int C>
double physical_l2_norm(const PhysicalField<C>& f);

template <int C>
double max_abs(const PhysicalField<C>& f);

template <int C>
double max_abs(const SpectralField<C>& F);

/// Largest |F(c, 0)| over components.
template <int C>
double mean_mode_magnitude(const SpectralField<C>& F);

/// Throws MeanModeError unless |F(c, 0)| <= 1e-12 ||F||.
template <int C>
void require_mean_free(const SpectralField<C>& F, const char* op);

/// max |F(c,-k) - conj(F(c,k))|.
template <int C>
double hermitian_defect(const SpectralField<C>& F);

/// Replaces F(k) by (F(k) + conj(F(-k))) / 2 and flags the field real.
template <int C>
void enforce_hermitian(SpectralField<C>& F);

}  // namespace emhd
