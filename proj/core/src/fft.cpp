#include "emhd/fft.hpp"

#include <cmath>
#include <vector>

#include "fft_plans.hpp"

namespace emhd {

namespace {

constexpr double kSymmetryTolerance = 1e-10;

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

template <int C>
SpectralField<C> forward_transform(const PhysicalField<C>& f) {
  const Grid3& grid = f.grid();
  const auto& plans = grid.fft_plans();
  const std::size_t n = grid.size();
  const double norm = 1.0 / static_cast<double>(n);
  SpectralField<C> out(grid, true);
  std::vector<Complex> buffer(n);
  for (int c = 0; c < C; ++c) {
    const auto src = f.component(c);
    for (std::size_t i = 0; i < n; ++i) buffer[i] = Complex(src[i], 0.0);
    auto dst = out.component(c);
    fftw_execute_dft(plans.forward, as_fftw(buffer.data()), as_fftw(dst.data()));
    for (auto& z : dst) z *= norm;
  }
  return out;
}

template <int C>
PhysicalField<C> inverse_transform(const SpectralField<C>& F) {
  if (!F.is_real())
    throw PreconditionError("inverse_transform: field is not flagged as real-valued");
  const Grid3& grid = F.grid();
  const auto& plans = grid.fft_plans();
  const std::size_t n = grid.size();
  PhysicalField<C> out(grid);
  std::vector<Complex> in(n);
  std::vector<Complex> buffer(n);
  for (int c = 0; c < C; ++c) {
    const auto src = F.component(c);
    std::copy(src.begin(), src.end(), in.begin());
    fftw_execute_dft(plans.backward, as_fftw(in.data()), as_fftw(buffer.data()));
    double max_abs = 0.0;
    double max_imag = 0.0;
    auto dst = out.component(c);
    for (std::size_t i = 0; i < n; ++i) {
      max_abs = std::max(max_abs, std::abs(buffer[i]));
      max_imag = std::max(max_imag, std::abs(buffer[i].imag()));
      dst[i] = buffer[i].real();
    }
    if (max_imag > kSymmetryTolerance * max_abs)
      throw SymmetryError("inverse_transform: coefficients of component " + std::to_string(c) +
                          " violate Hermitian symmetry (imaginary part " +
                          std::to_string(max_imag) + ")");
  }
  return out;
}

template SpectralField<1> forward_transform<1>(const PhysicalField<1>&);
template SpectralField<3> forward_transform<3>(const PhysicalField<3>&);
template PhysicalField<1> inverse_transform<1>(const SpectralField<1>&);
template PhysicalField<3> inverse_transform<3>(const SpectralField<3>&);

}  // namespace emhd
