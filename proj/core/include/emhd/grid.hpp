#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <vector>

namespace emhd {

namespace detail {
struct GridData;
struct FftPlans;
}  // namespace detail

/// Periodic box [0, box_length)^3 sampled on n^3 points, together with its
/// integer wavenumber lattice.
///
/// Flat indices are row-major over (x, y, z) with z fastest, in both physical
/// and Fourier space. Fourier index i maps to integer wavenumber i for
/// i < n/2, to -n/2 for the Nyquist index, and to i - n above it. Physical
/// wavenumbers are the integers scaled by 2*pi/box_length.
///
/// The dealias cutoff is expressed in integer lattice units: a mode is kept
/// when every |k_i| <= cutoff.
class Grid3 {
 public:
  explicit Grid3(int n_per_axis, double box_length = 2.0 * std::numbers::pi,
                 double dealias_cutoff = -1.0);

  int n() const noexcept;
  double box_length() const noexcept;
  double dealias_cutoff() const noexcept;
  std::size_t size() const noexcept;  // n^3

  /// 2*pi / box_length.
  double wavenumber_scale() const noexcept;

  /// Integer wavenumber of Fourier index `i` along one axis.
  int wavenumber(int i) const noexcept;

  /// Wavenumber used for odd derivatives: equal to `wavenumber(i)` except
  /// at the Nyquist index, where it is 0 so real fields stay real.
  int derivative_wavenumber(int i) const noexcept;

  /// |k|^2 in integer lattice units for a flat index.
  std::int32_t radial_index(std::size_t flat) const noexcept;
  std::int32_t max_radial_index() const noexcept;

  /// Physical |k| for an integer |k|^2.
  double magnitude(std::int32_t radial_index) const noexcept;

  /// Largest physical |k| on the lattice.
  double max_magnitude() const noexcept;

  bool in_dealias_band(std::size_t flat) const noexcept;

  /// Flat index of the mode -k.
  std::size_t conjugate_index(std::size_t flat) const noexcept;

  /// Unpacks a flat index into per-axis Fourier indices.
  void unflatten(std::size_t flat, int& i, int& j, int& l) const noexcept;
  std::size_t flatten(int i, int j, int l) const noexcept;

  /// Physical coordinate of grid index i along an axis.
  double coordinate(int i) const noexcept;

  const detail::FftPlans& fft_plans() const;

  friend bool operator==(const Grid3& a, const Grid3& b) noexcept;
  friend bool operator!=(const Grid3& a, const Grid3& b) noexcept { return !(a == b); }

 private:
  std::shared_ptr<const detail::GridData> data_;
};

}  // namespace emhd
