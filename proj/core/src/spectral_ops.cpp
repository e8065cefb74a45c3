#include "emhd/spectral_ops.hpp"

#include <string>

namespace emhd {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kMeanTolerance = 1e-12;

struct DerivativeVector {
  double x, y, z;
};

DerivativeVector derivative_vector(const Grid3& grid, std::size_t flat) {
  int i, j, l;
  grid.unflatten(flat, i, j, l);
  const double s = grid.wavenumber_scale();
  return {s * grid.derivative_wavenumber(i), s * grid.derivative_wavenumber(j),
          s * grid.derivative_wavenumber(l)};
}

}  // namespace

template <int C>
SpectralField<C> fractional_laplacian(const SpectralField<C>& F, double beta) {
  if (beta == 0.0) return F;
  if (beta < 0.0) require_mean_free(F, "fractional_laplacian");
  auto table = radial_table(F.grid(), [beta](double k) { return k == 0.0 ? 0.0 : std::pow(k, beta); });
  return apply_radial_table(F, table);
}

SpectralVectorField curl(const SpectralVectorField& F) {
  const Grid3& grid = F.grid();
  SpectralVectorField out(grid, F.is_real());
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const auto k = derivative_vector(grid, f);
    const Complex a = F(0, f), b = F(1, f), c = F(2, f);
    out(0, f) = kI * (k.y * c - k.z * b);
    out(1, f) = kI * (k.z * a - k.x * c);
    out(2, f) = kI * (k.x * b - k.y * a);
  }
  return out;
}

SpectralScalarField divergence(const SpectralVectorField& F) {
  const Grid3& grid = F.grid();
  SpectralScalarField out(grid, F.is_real());
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const auto k = derivative_vector(grid, f);
    out(0, f) = kI * (k.x * F(0, f) + k.y * F(1, f) + k.z * F(2, f));
  }
  return out;
}

SpectralVectorField gradient(const SpectralScalarField& g) {
  const Grid3& grid = g.grid();
  SpectralVectorField out(grid, g.is_real());
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const auto k = derivative_vector(grid, f);
    out(0, f) = kI * k.x * g(0, f);
    out(1, f) = kI * k.y * g(0, f);
    out(2, f) = kI * k.z * g(0, f);
  }
  return out;
}

SpectralVectorField leray_project(const SpectralVectorField& F) {
  const Grid3& grid = F.grid();
  SpectralVectorField out = F;
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const auto k = derivative_vector(grid, f);
    const double k2 = k.x * k.x + k.y * k.y + k.z * k.z;
    if (k2 == 0.0) continue;
    const Complex kdotf = (k.x * F(0, f) + k.y * F(1, f) + k.z * F(2, f)) / k2;
    out(0, f) -= k.x * kdotf;
    out(1, f) -= k.y * kdotf;
    out(2, f) -= k.z * kdotf;
  }
  return out;
}

template <int C>
SpectralField<C> dealias(const SpectralField<C>& F) {
  SpectralField<C> out = F;
  const Grid3& grid = F.grid();
  for (std::size_t f = 0; f < grid.size(); ++f) {
    if (grid.in_dealias_band(f)) continue;
    for (int c = 0; c < C; ++c) out(c, f) = Complex{};
  }
  return out;
}

template <int C>
double out_of_band_magnitude(const SpectralField<C>& F) {
  const Grid3& grid = F.grid();
  double m = 0.0;
  for (std::size_t f = 0; f < grid.size(); ++f) {
    if (grid.in_dealias_band(f)) continue;
    for (int c = 0; c < C; ++c) m = std::max(m, std::abs(F(c, f)));
  }
  return m;
}

template <int C>
void require_band_limited(const SpectralField<C>& F, const char* op, double rel_tol) {
  const double outside = out_of_band_magnitude(F);
  if (outside > rel_tol * max_abs(F))
    throw ResolutionError(std::string(op) +
                          ": input has modes outside the dealiased band; the product would alias");
}

PhysicalVectorField cross_product(const PhysicalVectorField& F, const PhysicalVectorField& G) {
  require_same_grid(F, G, "cross_product");
  PhysicalVectorField out(F.grid());
  const std::size_t n = F.grid().size();
  for (std::size_t i = 0; i < n; ++i) {
    const double a0 = F(0, i), a1 = F(1, i), a2 = F(2, i);
    const double b0 = G(0, i), b1 = G(1, i), b2 = G(2, i);
    out(0, i) = a1 * b2 - a2 * b1;
    out(1, i) = a2 * b0 - a0 * b2;
    out(2, i) = a0 * b1 - a1 * b0;
  }
  return out;
}

PhysicalScalarField dot_product(const PhysicalVectorField& F, const PhysicalVectorField& G) {
  require_same_grid(F, G, "dot_product");
  PhysicalScalarField out(F.grid());
  const std::size_t n = F.grid().size();
  for (std::size_t i = 0; i < n; ++i) out(0, i) = F(0, i) * G(0, i) + F(1, i) * G(1, i) + F(2, i) * G(2, i);
  return out;
}

PhysicalScalarField multiply(const PhysicalScalarField& f, const PhysicalScalarField& g) {
  require_same_grid(f, g, "multiply");
  PhysicalScalarField out(f.grid());
  const std::size_t n = f.grid().size();
  for (std::size_t i = 0; i < n; ++i) out(0, i) = f(0, i) * g(0, i);
  return out;
}

SpectralVectorField dealiased_cross(const SpectralVectorField& a, const SpectralVectorField& b) {
  require_same_grid(a, b, "dealiased_cross");
  return dealias(forward_transform(cross_product(inverse_transform(a), inverse_transform(b))));
}

template <int C>
double sobolev_norm(const SpectralField<C>& F, double sigma) {
  if (sigma < 0.0) require_mean_free(F, "sobolev_norm");
  const Grid3& grid = F.grid();
  std::vector<double> weight;
  if (sigma != 0.0)
    weight = radial_table(grid, [sigma](double k) { return k == 0.0 ? 0.0 : std::pow(k, 2.0 * sigma); });
  double sum = 0.0;
  for (int c = 0; c < C; ++c) {
    const auto comp = F.component(c);
    for (std::size_t f = 0; f < comp.size(); ++f) {
      const double w = sigma == 0.0 ? 1.0 : weight[static_cast<std::size_t>(grid.radial_index(f))];
      sum += w * std::norm(comp[f]);
    }
  }
  return std::sqrt(sum);
}

template <int C>
double l2_norm(const SpectralField<C>& F) {
  double sum = 0.0;
  for (const auto& z : F.data()) sum += std::norm(z);
  return std::sqrt(sum);
}

template <int C>
double inner_product(const SpectralField<C>& F, const SpectralField<C>& G) {
  require_same_grid(F, G, "inner_product");
  const auto a = F.data();
  const auto b = G.data();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return sum;
}

template <int C>
double physical_l2_norm(const PhysicalField<C>& f) {
  double sum = 0.0;
  for (double v : f.data()) sum += v * v;
  return std::sqrt(sum / static_cast<double>(f.grid().size()));
}

template <int C>
double max_abs(const PhysicalField<C>& f) {
  double m = 0.0;
  for (double v : f.data()) m = std::max(m, std::abs(v));
  return m;
}

template <int C>
double max_abs(const SpectralField<C>& F) {
  double m = 0.0;
  for (const auto& z : F.data()) m = std::max(m, std::abs(z));
  return m;
}

template <int C>
double mean_mode_magnitude(const SpectralField<C>& F) {
  double m = 0.0;
  for (int c = 0; c < C; ++c) m = std::max(m, std::abs(F(c, 0)));
  return m;
}

template <int C>
void require_mean_free(const SpectralField<C>& F, const char* op) {
  const double mean = mean_mode_magnitude(F);
  if (mean > 0.0 && mean > kMeanTolerance * l2_norm(F))
    throw MeanModeError(std::string(op) + ": negative fractional power needs a zero mean mode (|F(0)| = " +
                        std::to_string(mean) + ")");
}

template <int C>
double hermitian_defect(const SpectralField<C>& F) {
  const Grid3& grid = F.grid();
  double m = 0.0;
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const std::size_t g = grid.conjugate_index(f);
    for (int c = 0; c < C; ++c) m = std::max(m, std::abs(F(c, g) - std::conj(F(c, f))));
  }
  return m;
}

template <int C>
void enforce_hermitian(SpectralField<C>& F) {
  const Grid3& grid = F.grid();
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const std::size_t g = grid.conjugate_index(f);
    if (g < f) continue;
    for (int c = 0; c < C; ++c) {
      const Complex avg = 0.5 * (F(c, f) + std::conj(F(c, g)));
      F(c, f) = avg;
      F(c, g) = std::conj(avg);
    }
  }
  F.set_real(true);
}

#define EMHD_INSTANTIATE(C)                                                              \
  template SpectralField<C> fractional_laplacian<C>(const SpectralField<C>&, double);    \
  template SpectralField<C> dealias<C>(const SpectralField<C>&);                         \
  template double out_of_band_magnitude<C>(const SpectralField<C>&);                     \
  template void require_band_limited<C>(const SpectralField<C>&, const char*, double);   \
  template double sobolev_norm<C>(const SpectralField<C>&, double);                      \
  template double l2_norm<C>(const SpectralField<C>&);                                   \
  template double inner_product<C>(const SpectralField<C>&, const SpectralField<C>&);    \
  template double physical_l2_norm<C>(const PhysicalField<C>&);                          \
  template double max_abs<C>(const PhysicalField<C>&);                                   \
  template double max_abs<C>(const SpectralField<C>&);                                   \
  template double mean_mode_magnitude<C>(const SpectralField<C>&);                       \
  template void require_mean_free<C>(const SpectralField<C>&, const char*);              \
  template double hermitian_defect<C>(const SpectralField<C>&);                          \
  template void enforce_hermitian<C>(SpectralField<C>&);

EMHD_INSTANTIATE(1)
EMHD_INSTANTIATE(3)

#undef EMHD_INSTANTIATE

}  // namespace emhd
