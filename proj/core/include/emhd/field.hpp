#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "emhd/errors.hpp"
#include "emhd/grid.hpp"

namespace emhd {

using Complex = std::complex<double>;

/// Fourier coefficients of a C-component field on a Grid3. Components are
/// stored contiguously, each in the grid's row-major k-order.
///
/// `is_real()` marks a field that represents real physical data; such a
/// field must satisfy coeffs(c, -k) == conj(coeffs(c, k)).
template <int C>
class SpectralField {
 public:
  static constexpr int kComponents = C;

  explicit SpectralField(Grid3 grid, bool real = true)
      : grid_(std::move(grid)), coeffs_(C * grid_.size()), real_(real) {}

  const Grid3& grid() const noexcept { return grid_; }
  bool is_real() const noexcept { return real_; }
  void set_real(bool real) noexcept { real_ = real; }

  std::span<Complex> component(int c) noexcept {
    return {coeffs_.data() + static_cast<std::size_t>(c) * grid_.size(), grid_.size()};
  }
  std::span<const Complex> component(int c) const noexcept {
    return {coeffs_.data() + static_cast<std::size_t>(c) * grid_.size(), grid_.size()};
  }

  Complex& operator()(int c, std::size_t flat) noexcept {
    return coeffs_[static_cast<std::size_t>(c) * grid_.size() + flat];
  }
  const Complex& operator()(int c, std::size_t flat) const noexcept {
    return coeffs_[static_cast<std::size_t>(c) * grid_.size() + flat];
  }

  std::span<Complex> data() noexcept { return coeffs_; }
  std::span<const Complex> data() const noexcept { return coeffs_; }

  void set_zero() { std::fill(coeffs_.begin(), coeffs_.end(), Complex{}); }
  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const Complex& z) { return z == Complex{}; });
  }

  SpectralField& operator+=(const SpectralField& o) {
    check_same(o, "operator+=");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    real_ = real_ && o.real_;
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    check_same(o, "operator-=");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    real_ = real_ && o.real_;
    return *this;
  }
  SpectralField& operator*=(double a) {
    for (auto& z : coeffs_) z *= a;
    return *this;
  }

  /// this += a * x
  SpectralField& add_scaled(double a, const SpectralField& x) {
    check_same(x, "add_scaled");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += a * x.coeffs_[i];
    real_ = real_ && x.real_;
    return *this;
  }

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
  friend SpectralField operator-(SpectralField a) { return a *= -1.0; }

 private:
  void check_same(const SpectralField& o, std::string_view op) const {
    if (grid_ != o.grid_) throw ShapeError(std::string(op) + ": fields live on different grids");
  }

  Grid3 grid_;
  std::vector<Complex> coeffs_;
  bool real_;
};

/// Real samples of a C-component field on the physical grid.
template <int C>
class PhysicalField {
 public:
  static constexpr int kComponents = C;

  explicit PhysicalField(Grid3 grid) : grid_(std::move(grid)), values_(C * grid_.size()) {}

  const Grid3& grid() const noexcept { return grid_; }

  std::span<double> component(int c) noexcept {
    return {values_.data() + static_cast<std::size_t>(c) * grid_.size(), grid_.size()};
  }
  std::span<const double> component(int c) const noexcept {
    return {values_.data() + static_cast<std::size_t>(c) * grid_.size(), grid_.size()};
  }

  double& operator()(int c, std::size_t flat) noexcept {
    return values_[static_cast<std::size_t>(c) * grid_.size() + flat];
  }
  const double& operator()(int c, std::size_t flat) const noexcept {
    return values_[static_cast<std::size_t>(c) * grid_.size() + flat];
  }

  std::span<double> data() noexcept { return values_; }
  std::span<const double> data() const noexcept { return values_; }

 private:
  Grid3 grid_;
  std::vector<double> values_;
};

using SpectralVectorField = SpectralField<3>;
using SpectralScalarField = SpectralField<1>;
using PhysicalVectorField = PhysicalField<3>;
using PhysicalScalarField = PhysicalField<1>;

template <class A, class B>
void require_same_grid(const A& a, const B& b, std::string_view op) {
  if (a.grid() != b.grid()) throw ShapeError(std::string(op) + ": fields live on different grids");
}

}  // namespace emhd
