#pragma once

// Reference computations that share no code path with the library: direct
// DFT sums, periodic finite differences, sampled analytic fields and
// elementary quadrature.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "emhd/field.hpp"
#include "emhd/grid.hpp"

namespace oracle {

using Vec3 = std::array<double, 3>;
using VecFn = std::function<Vec3(double, double, double)>;

inline double coord(const emhd::Grid3& g, int i) { return g.box_length() * i / g.n(); }

/// Samples an analytic vector field on the physical grid.
inline emhd::PhysicalVectorField sample(const emhd::Grid3& g, const VecFn& fn) {
  emhd::PhysicalVectorField f(g);
  const int n = g.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const Vec3 v = fn(coord(g, i), coord(g, j), coord(g, l));
        const std::size_t flat = (static_cast<std::size_t>(i) * n + j) * n + l;
        for (int c = 0; c < 3; ++c) f(c, flat) = v[c];
      }
  return f;
}

/// Direct evaluation of (1/N^3) sum_x f(x) exp(-i k.x) for one component.
inline std::complex<double> dft_coefficient(const emhd::PhysicalVectorField& f, int c, int kx, int ky, int kz) {
  const auto& g = f.grid();
  const int n = g.n();
  const double scale = 2.0 * std::numbers::pi / g.box_length();
  std::complex<double> acc{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const double phase = -scale * (kx * coord(g, i) + ky * coord(g, j) + kz * coord(g, l));
        acc += f(c, (static_cast<std::size_t>(i) * n + j) * n + l) * std::polar(1.0, phase);
      }
  return acc / static_cast<double>(g.size());
}

/// Second-order periodic central difference of component c along `axis`.
inline std::vector<double> central_diff(const emhd::PhysicalVectorField& f, int c, int axis) {
  const auto& g = f.grid();
  const int n = g.n();
  const double h = g.box_length() / n;
  std::vector<double> out(g.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        std::array<int, 3> p{i, j, l}, m{i, j, l};
        p[axis] = (p[axis] + 1) % n;
        m[axis] = (m[axis] + n - 1) % n;
        auto at = [&](const std::array<int, 3>& q) {
          return f(c, (static_cast<std::size_t>(q[0]) * n + q[1]) * n + q[2]);
        };
        out[(static_cast<std::size_t>(i) * n + j) * n + l] = (at(p) - at(m)) / (2.0 * h);
      }
  return out;
}

inline emhd::PhysicalVectorField fd_curl(const emhd::PhysicalVectorField& f) {
  emhd::PhysicalVectorField out(f.grid());
  const auto dzy = central_diff(f, 2, 1), dyz = central_diff(f, 1, 2);
  const auto dxz = central_diff(f, 0, 2), dzx = central_diff(f, 2, 0);
  const auto dyx = central_diff(f, 1, 0), dxy = central_diff(f, 0, 1);
  for (std::size_t i = 0; i < f.grid().size(); ++i) {
    out(0, i) = dzy[i] - dyz[i];
    out(1, i) = dxz[i] - dzx[i];
    out(2, i) = dyx[i] - dxy[i];
  }
  return out;
}

inline emhd::PhysicalVectorField pointwise_cross(const emhd::PhysicalVectorField& a,
                                                 const emhd::PhysicalVectorField& b) {
  emhd::PhysicalVectorField out(a.grid());
  for (std::size_t i = 0; i < a.grid().size(); ++i) {
    out(0, i) = a(1, i) * b(2, i) - a(2, i) * b(1, i);
    out(1, i) = a(2, i) * b(0, i) - a(0, i) * b(2, i);
    out(2, i) = a(0, i) * b(1, i) - a(1, i) * b(0, i);
  }
  return out;
}

inline double max_difference(const emhd::PhysicalVectorField& a, const emhd::PhysicalVectorField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

/// Composite Simpson rule on a uniform grid with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Smoothstep built from the bump exp(-1/(u(1-u))) by direct Simpson
/// integration, independent of the library's adaptive quadrature.
inline double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  auto bump = [](double u) { return (u <= 0.0 || u >= 1.0) ? 0.0 : std::exp(-1.0 / (u * (1.0 - u))); };
  return simpson(bump, 0.0, t, 4000) / simpson(bump, 0.0, 1.0, 4000);
}

}  // namespace oracle
