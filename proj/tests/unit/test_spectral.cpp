#include <cmath>
#include <numbers>

#include "doctest.h"
#include "emhd/errors.hpp"
#include "emhd/fft.hpp"
#include "emhd/grid.hpp"
#include "emhd/model.hpp"
#include "emhd/random_fields.hpp"
#include "emhd/spectral_ops.hpp"
#include "oracles.hpp"

using namespace emhd;

namespace {

PhysicalVectorField noise(const Grid3& g, std::uint64_t seed) {
  const CounterRng rng(seed);
  PhysicalVectorField f(g);
  for (std::size_t i = 0; i < f.data().size(); ++i) f.data()[i] = rng.normal(i);
  return f;
}

}  // namespace

TEST_CASE("grid wavenumber layout and dealias band") {
  const Grid3 g(8);
  CHECK(g.wavenumber(0) == 0);
  CHECK(g.wavenumber(3) == 3);
  CHECK(g.wavenumber(4) == -4);
  CHECK(g.wavenumber(7) == -1);
  CHECK(g.derivative_wavenumber(4) == 0);
  CHECK(g.dealias_cutoff() == doctest::Approx(8.0 / 3.0));
  CHECK(g.in_dealias_band(g.flatten(2, 0, 6)));
  CHECK_FALSE(g.in_dealias_band(g.flatten(3, 0, 0)));
  CHECK(g.conjugate_index(g.flatten(1, 2, 3)) == g.flatten(7, 6, 5));
  CHECK(g.radial_index(g.flatten(1, 7, 2)) == 6);
  const Grid3 box(8, 4.0 * std::numbers::pi);
  CHECK(box.wavenumber_scale() == doctest::Approx(0.5));
  CHECK(box.magnitude(4) == doctest::Approx(1.0));
}

TEST_CASE("forward transform agrees with a direct DFT sum") {
  const Grid3 g(6);
  const auto f = noise(g, 3);
  const auto F = forward_transform(f);
  double worst = 0.0;
  for (int kx : {0, 1, -2, 3})
    for (int ky : {0, -1, 2})
      for (int kz : {0, 1, -3}) {
        const auto idx = g.flatten((kx + 6) % 6, (ky + 6) % 6, (kz + 6) % 6);
        for (int c = 0; c < 3; ++c)
          worst = std::max(worst, std::abs(F(c, idx) - oracle::dft_coefficient(f, c, kx, ky, kz)));
      }
  CHECK(worst < 1e-14);
}

TEST_CASE("transform round trip and Parseval on random grids") {
  for (int n : {8, 12, 16}) {
    const Grid3 g(n);
    const auto f = noise(g, 10 + n);
    const auto F = forward_transform(f);
    CHECK(hermitian_defect(F) < 1e-14);
    CHECK(oracle::max_difference(inverse_transform(F), f) < 1e-12 * max_abs(f));
    CHECK(l2_norm(F) == doctest::Approx(physical_l2_norm(f)).epsilon(1e-12));
  }
}

TEST_CASE("derivatives match analytic trigonometric fields") {
  const Grid3 g(16);
  auto F = forward_transform(oracle::sample(g, [](double x, double y, double z) {
    return oracle::Vec3{std::sin(2 * y) * std::cos(z), std::cos(3 * x), std::sin(x + y)};
  }));
  const auto expected = oracle::sample(g, [](double x, double y, double z) {
    // curl of (sin 2y cos z, cos 3x, sin(x+y))
    return oracle::Vec3{std::cos(x + y), -std::sin(2 * y) * std::sin(z) - std::cos(x + y),
                        -3 * std::sin(3 * x) - 2 * std::cos(2 * y) * std::cos(z)};
  });
  CHECK(oracle::max_difference(inverse_transform(curl(F)), expected) < 1e-12);
  CHECK(max_abs(divergence(curl(F))) < 1e-13);
}

TEST_CASE("fractional Laplacian scales single modes and guards the mean") {
  const Grid3 g(16);
  const auto F = forward_transform(oracle::sample(g, [](double, double y, double z) {
    return oracle::Vec3{std::sin(3 * y + 4 * z), 0.0, 0.0};
  }));
  const auto L = fractional_laplacian(F, 0.7);
  CHECK(l2_norm(L) == doctest::Approx(std::pow(5.0, 0.7) * l2_norm(F)).epsilon(1e-13));
  CHECK(sobolev_norm(F, -1.5) == doctest::Approx(std::pow(5.0, -1.5) * l2_norm(F)).epsilon(1e-13));

  auto with_mean = F;
  with_mean(0, 0) = 1.0;
  CHECK_THROWS_AS(fractional_laplacian(with_mean, -0.5), MeanModeError);
  CHECK(fractional_laplacian(with_mean, 0.5)(0, 0) == Complex{});
}

TEST_CASE("Leray projection removes exactly the gradient part") {
  const Grid3 g(16);
  const auto solenoidal = random_band_field(g, 5, 1, 5);
  SpectralScalarField phi(g);
  const auto f = forward_transform(noise(g, 6));
  std::copy(f.component(0).begin(), f.component(0).end(), phi.component(0).begin());
  phi(0, 0) = 0.0;
  const auto grad = dealias(gradient(phi));
  const auto P = leray_project(solenoidal + grad);
  CHECK(l2_norm(P - solenoidal) < 1e-12 * l2_norm(solenoidal));
  CHECK(std::abs(inner_product(leray_project(grad), solenoidal)) < 1e-14);
}

TEST_CASE("dealiased products reject out-of-band inputs") {
  const Grid3 g(16);
  const auto a = random_band_field(g, 1, 1, 4);
  const auto wide = forward_transform(noise(g, 2));
  CHECK(out_of_band_magnitude(dealiased_cross(a, wide)) == 0.0);
  CHECK_NOTHROW(hall_nonlinearity(a, a, ModelParams{}));
  CHECK_THROWS_AS(hall_nonlinearity(a, wide, ModelParams{}), ResolutionError);
  CHECK(out_of_band_magnitude(dealias(wide)) == 0.0);
}

TEST_CASE("fields on different grids do not mix") {
  const auto a = beltrami_field(Grid3(8));
  const auto b = beltrami_field(Grid3(16));
  CHECK_THROWS_AS(a + b, ShapeError);
  CHECK(Grid3(8) == Grid3(8));
}

TEST_CASE("random band fields are real, solenoidal, band-limited and seeded") {
  const Grid3 g(16);
  const auto F = random_band_field(g, 42, 2, 4);
  CHECK(hermitian_defect(F) < 1e-15);
  CHECK(max_abs(divergence(F)) < 1e-13 * max_abs(F) * g.max_magnitude());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double k = g.magnitude(g.radial_index(i));
    if (k < 2 - 1e-12 || k > 4 + 1e-12)
      for (int c = 0; c < 3; ++c) REQUIRE(F(c, i) == Complex{});
  }
  const auto same = random_band_field(g, 42, 2, 4);
  CHECK(std::equal(F.data().begin(), F.data().end(), same.data().begin()));
  CHECK(l2_norm(random_band_field(g, 43, 2, 4) - F) > 0.1 * l2_norm(F));
  CHECK(sobolev_norm(rescale_to_norm(F, 1.25, 3e-2), 1.25) == doctest::Approx(3e-2).epsilon(1e-13));
}
