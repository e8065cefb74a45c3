#include "emhd/random_fields.hpp"

#include <cmath>
#include <numbers>

#include "emhd/spectral_ops.hpp"

namespace emhd {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// First nonzero component positive.
bool canonical(int kx, int ky, int kz) {
  if (kx != 0) return kx > 0;
  if (ky != 0) return ky > 0;
  return kz > 0;
}

template <class Fn>
void for_each_canonical_mode(const Grid3& grid, double k_lo, double k_hi, Fn&& fn) {
  const double lo2 = k_lo * k_lo, hi2 = k_hi * k_hi;
  for (std::size_t f = 0; f < grid.size(); ++f) {
    if (!grid.in_dealias_band(f)) continue;
    const auto m = grid.radial_index(f);
    if (m == 0 || m < lo2 || m > hi2) continue;
    int i, j, l;
    grid.unflatten(f, i, j, l);
    const int kx = grid.wavenumber(i), ky = grid.wavenumber(j), kz = grid.wavenumber(l);
    if (!canonical(kx, ky, kz)) continue;
    fn(f, kx, ky, kz);
  }
}

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t counter) const noexcept {
  return splitmix64(seed_ ^ splitmix64(counter));
}

double CounterRng::uniform(std::uint64_t counter) const noexcept {
  return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t counter) const noexcept {
  const double u1 = uniform(2 * counter);
  const double u2 = uniform(2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

SpectralVectorField beltrami_field(const Grid3& grid, double amplitude) {
  SpectralVectorField B(grid, true);
  const int n = grid.n();
  const std::size_t plus = grid.flatten(0, 0, 1);
  const std::size_t minus = grid.flatten(0, 0, n - 1);
  // sin z = (e^{iz} - e^{-iz}) / 2i, cos z = (e^{iz} + e^{-iz}) / 2
  B(0, plus) = Complex(0.0, -0.5 * amplitude);
  B(0, minus) = Complex(0.0, 0.5 * amplitude);
  B(1, plus) = Complex(0.5 * amplitude, 0.0);
  B(1, minus) = Complex(0.5 * amplitude, 0.0);
  return B;
}

SpectralVectorField random_band_field(const Grid3& grid, std::uint64_t seed, double k_lo,
                                      double k_hi) {
  const CounterRng rng(seed);
  SpectralVectorField F(grid, true);
  for_each_canonical_mode(grid, k_lo, k_hi, [&](std::size_t f, int, int, int) {
    const std::size_t g = grid.conjugate_index(f);
    for (int c = 0; c < 3; ++c) {
      const std::uint64_t base = 8 * static_cast<std::uint64_t>(f) + 2 * static_cast<std::uint64_t>(c);
      const Complex z(rng.normal(base), rng.normal(base + 1));
      F(c, f) = z;
      F(c, g) = std::conj(z);
    }
  });
  return leray_project(F);
}

SpectralVectorField power_law_field(const Grid3& grid, std::uint64_t seed, double slope,
                                    double k_lo, double k_hi) {
  const CounterRng rng(seed);
  SpectralVectorField F(grid, true);
  for_each_canonical_mode(grid, k_lo, k_hi, [&](std::size_t f, int kx, int ky, int kz) {
    const std::uint64_t base = 8 * static_cast<std::uint64_t>(f);
    double v[3] = {rng.normal(base), rng.normal(base + 1), rng.normal(base + 2)};
    const double k[3] = {static_cast<double>(kx), static_cast<double>(ky), static_cast<double>(kz)};
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    const double vk = (v[0] * k[0] + v[1] * k[1] + v[2] * k[2]) / k2;
    for (int c = 0; c < 3; ++c) v[c] -= vk * k[c];
    double vn = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (vn == 0.0) {
      // Degenerate draw: fall back to a fixed orthogonal direction.
      const double e[3] = {k[1] - k[2], k[2] - k[0], k[0] - k[1]};
      for (int c = 0; c < 3; ++c) v[c] = e[c];
      vn = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    }
    const double magnitude = std::pow(grid.magnitude(grid.radial_index(f)), -slope);
    const double theta = 2.0 * std::numbers::pi * rng.uniform(base + 3);
    const Complex phase = std::polar(magnitude, theta);
    const std::size_t g = grid.conjugate_index(f);
    for (int c = 0; c < 3; ++c) {
      F(c, f) = phase * (v[c] / vn);
      F(c, g) = std::conj(F(c, f));
    }
  });
  return F;
}

SpectralVectorField rescale_to_norm(SpectralVectorField F, double sigma, double target) {
  const double current = sobolev_norm(F, sigma);
  if (current == 0.0) return F;
  F *= target / current;
  return F;
}

}  // namespace emhd
