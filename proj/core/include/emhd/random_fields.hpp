#pragma once

#include <cstdint>

#include "emhd/field.hpp"

namespace emhd {

/// Counter-based generator: every draw is a pure function of (seed, counter),
/// so fields do not depend on traversal order. Mixing is SplitMix64.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t counter) const noexcept;
  /// Uniform on (0, 1).
  double uniform(std::uint64_t counter) const noexcept;
  /// Standard normal via Box-Muller on counters 2c and 2c+1.
  double normal(std::uint64_t counter) const noexcept;

 private:
  std::uint64_t seed_;
};

/// amplitude * (sin z, cos z, 0) with z scaled to the box; a curl
/// eigenfunction at the lowest nonzero wavenumber.
SpectralVectorField beltrami_field(const Grid3& grid, double amplitude = 1.0);

/// Divergence-free projection of i.i.d. unit-normal complex coefficients on
/// the shell k_lo <= |k| <= k_hi (integer lattice units) inside the dealias
/// band. Hermitian and mean-free; not normalized.
SpectralVectorField random_band_field(const Grid3& grid, std::uint64_t seed, double k_lo,
                                      double k_hi);

/// Coefficients of exact magnitude |k|^-slope, each pointing along a random
/// unit direction orthogonal to k with a random phase, on
/// k_lo <= |k| <= k_hi inside the dealias band.
SpectralVectorField power_law_field(const Grid3& grid, std::uint64_t seed, double slope,
                                    double k_lo, double k_hi);

/// Rescales F so that its homogeneous H^sigma norm equals `target`. A zero
/// field is returned unchanged.
SpectralVectorField rescale_to_norm(SpectralVectorField F, double sigma, double target);

}  // namespace emhd
