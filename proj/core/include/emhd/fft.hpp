#pragma once

#include "emhd/field.hpp"

namespace emhd {

/// Discrete Fourier transform per component. The forward direction carries
/// the 1/n^3 factor, so the coefficient of cos(z) at k = (0,0,+-1) is 1/2.
/// The result is flagged real.
template <int C>
SpectralField<C> forward_transform(const PhysicalField<C>& f);

/// Inverse of `forward_transform`. Requires a real-flagged field and throws
/// SymmetryError when the synthesized imaginary part exceeds 1e-10 of the
/// field's magnitude.
template <int C>
PhysicalField<C> inverse_transform(const SpectralField<C>& F);

}  // namespace emhd
