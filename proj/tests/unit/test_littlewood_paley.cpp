#include <cmath>

#include "doctest.h"
#include "emhd/errors.hpp"
#include "emhd/fft.hpp"
#include "emhd/gevrey.hpp"
#include "emhd/littlewood_paley.hpp"
#include "emhd/random_fields.hpp"
#include "emhd/spectral_ops.hpp"
#include "oracles.hpp"

using namespace emhd;

namespace {

SpectralVectorField wide_field(const Grid3& g, std::uint64_t seed) {
  const CounterRng rng(seed);
  PhysicalVectorField f(g);
  for (std::size_t i = 0; i < f.data().size(); ++i) f.data()[i] = rng.normal(i);
  auto F = dealias(forward_transform(f));
  for (int c = 0; c < 3; ++c) F(c, 0) = 0.0;
  return F;
}

}  // namespace

TEST_CASE("smoothstep matches direct Simpson integration of the bump") {
  for (double t : {0.05, 0.2, 0.37, 0.5, 0.61, 0.9, 0.99})
    CHECK(bump_smoothstep(t) == doctest::Approx(oracle::smoothstep(t)).epsilon(1e-10));
  CHECK(bump_smoothstep(0.0) == 0.0);
  CHECK(bump_smoothstep(1.0) == 1.0);
  CHECK(bump_smoothstep(0.3) + bump_smoothstep(0.7) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("cutoff chi has the plateau and support radii") {
  const CutoffProfile prof;
  CHECK(prof.chi(0.0) == 1.0);
  CHECK(prof.chi(0.75) == 1.0);
  CHECK(prof.chi(1.0) == 0.0);
  CHECK(prof.chi(0.875) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(chi_eval(0.8) == prof.chi(0.8));
  // phi vanishes outside [3/4, 2]
  CHECK(prof.phi(0.74) == 0.0);
  CHECK(prof.phi(2.01) == 0.0);
  CHECK(prof.phi(1.0) == 1.0);
}

TEST_CASE("partition of unity holds on the lattice and detects a shrunken plateau") {
  for (int n : {16, 32}) {
    const Grid3 g(n);
    CHECK(partition_of_unity_defect(g) < 1e-12);
    CHECK(partition_of_unity_defect(g, CutoffProfile{0.7, 1.0}) > 1e-6);
  }
}

TEST_CASE("dyadic range spans the lattice") {
  const auto r = dyadic_range(Grid3(16));
  CHECK(r.j_min == -1);
  // |k| reaches 8 sqrt 3; the top block must still see it.
  const double top = Grid3(16).max_magnitude();
  CHECK(std::ldexp(2.0, r.j_max) >= top);
  CHECK(std::ldexp(2.0, r.j_max - 1) < top * 4.0 / 3.0);
}

TEST_CASE("blocks reconstruct the field and stay inside their rings") {
  const Grid3 g(32);
  const auto F = wide_field(g, 9);
  CHECK(l2_norm(lp_reconstruct(F) - F) < 1e-10 * l2_norm(F));
  CHECK(shell_support_leak(F) == 0.0);
  const auto r = dyadic_range(g);
  double mass = 0.0;
  for (int j = r.j_min; j <= r.j_max; ++j) {
    const auto D = lp_project(F, j);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double k = g.magnitude(g.radial_index(i));
      if (k < 0.75 * std::ldexp(1.0, j) || k > 2.0 * std::ldexp(1.0, j))
        for (int c = 0; c < 3; ++c) REQUIRE(D(c, i) == Complex{});
    }
    mass += std::pow(l2_norm(D), 2);
  }
  // almost-orthogonality: neighbouring blocks overlap, so the block mass sum
  // is within a factor 2 of the total.
  CHECK(mass <= std::pow(l2_norm(F), 2) * (1 + 1e-12));
  CHECK(mass >= 0.5 * std::pow(l2_norm(F), 2));
}

TEST_CASE("shell spectrum of a single mode sits in the expected blocks") {
  const Grid3 g(16);
  const auto B = beltrami_field(g);
  const auto s = shell_spectrum(B, 1.0);
  double total = 0.0;
  for (std::size_t i = 0; i < s.masses.size(); ++i) {
    const int j = s.j_min + static_cast<int>(i);
    if (j != -1 && j != 0) CHECK(s.masses[i] == 0.0);
    total += s.masses[i];
  }
  CHECK(total > 0.0);
  CHECK(dyadic_sobolev_norm(B, 2.0) == doctest::Approx(sobolev_norm(B, 2.0)).epsilon(1e-14));
}

TEST_CASE("Bony decomposition reassembles the product block") {
  const Grid3 g(32);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto u = random_band_field(g, seed, 1, 10);
    const auto v = random_band_field(g, seed + 50, 1, 10);
    const auto prod = dealias(forward_transform(dot_product(inverse_transform(u), inverse_transform(v))));
    const auto r = dyadic_range(g);
    for (int j = r.j_min; j <= r.j_max; ++j) {
      const auto terms = bony_decompose(u, v, j);
      CHECK(l2_norm(terms.sum() - product_block(u, v, j)) < 1e-10 * l2_norm(prod));
    }
  }
  // scalar variant: u * 1 has only the low-high piece
  SpectralScalarField one(g), f(g);
  one(0, 0) = 1.0;
  const auto rb = random_band_field(g, 4, 1, 6);
  std::copy(rb.component(0).begin(), rb.component(0).end(), f.component(0).begin());
  const auto t = bony_decompose(one, f, 2);
  CHECK(l2_norm(t.low_high - lp_project(f, 2)) < 1e-13 * l2_norm(f));
  CHECK(l2_norm(t.high_low) < 1e-14);
}

TEST_CASE("curl commutator with a constant field vanishes and is finite otherwise") {
  const Grid3 g(16);
  const auto f = random_band_field(g, 3, 1, 5);
  SpectralVectorField c(g);
  c(2, 0) = 2.0;
  CHECK(l2_norm(commutator_curl(c, f, 1)) < 1e-13 * l2_norm(curl(f)));
  const auto gf = random_band_field(g, 4, 1, 3);
  CHECK(std::isfinite(commutator_gain_ratio(gf, f, 1)));
  CHECK(std::isfinite(commutator_gain_ratio(gf, f, 1, GevreyParams{1.0, 0.2, 1.0})));
}

TEST_CASE("Bernstein ratios for a ring-supported block") {
  const Grid3 g(32);
  const auto D = lp_project(wide_field(g, 12), 3);
  const auto r = bernstein_check(D, 3, 2.0, 2.0);
  CHECK(r.within_brackets);
  CHECK(r.gradient_ratio > 0.75 / 8);
  CHECK(r.gradient_ratio < 2.0 * 8);
  CHECK_THROWS_AS(bernstein_check(D, 3, 3.0, 2.0), PreconditionError);
  CHECK_THROWS(bernstein_check(wide_field(g, 13), 3, 2.0, 2.0));
}

TEST_CASE("Gevrey multipliers compose and respect the overflow guard") {
  const Grid3 g(16);
  const auto F = wide_field(g, 21);
  const GevreyParams a{0.5, 0.2, 1.0};
  const auto undo = apply_radial_multiplier(gevrey_apply(F, a), [](double k) { return std::exp(-0.2 * std::sqrt(k)); });
  CHECK(l2_norm(undo - F) < 1e-13 * l2_norm(F));
  CHECK_THROWS_AS(gevrey_apply(F, GevreyParams{0.5, -0.2, 1.0}), PreconditionError);
  CHECK(gevrey_norm(F, GevreyParams{1.0, 0.0, 1.0}, 0.5) == doctest::Approx(sobolev_norm(F, 0.5)).epsilon(1e-14));
  CHECK_THROWS_AS(gevrey_apply(F, GevreyParams{1.0, 1000.0, 1.0}), RadiusError);
  for (double x : {0.0, 0.5, 3.0, 20.0}) CHECK(e_operator_symbol(x) <= std::exp(x) * (1 + 1e-15));
  CHECK(e_operator_symbol(0.0) == 1.0);
  CHECK(e_operator_symbol(1e-9) == doctest::Approx(1.0 + 5e-10).epsilon(1e-15));
  CHECK(e_operator_symbol(2.0) == doctest::Approx((std::exp(2.0) - 1.0) / 2.0).epsilon(1e-15));
}

TEST_CASE("derivative bound holds for a Gevrey-regular field") {
  const Grid3 g(16);
  const auto F = random_band_field(g, 8, 1, 5);
  for (int b = 0; b <= 4; ++b) {
    const auto d = derivative_bound_check(F, GevreyParams{1.0, 0.3, 1.0}, 0.5, {b, 0, 1});
    CHECK(d.holds);
    CHECK(d.lhs <= d.rhs * (1 + 1e-10));
  }
}
