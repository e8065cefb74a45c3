#include <cmath>

#include "doctest.h"
#include "emhd/errors.hpp"
#include "emhd/random_fields.hpp"
#include "emhd/spectral_ops.hpp"
#include "emhd/stepper.hpp"

using namespace emhd;

namespace {

SpectralVectorField final_state(const SpectralVectorField& B0, const ModelParams& p, double dt, double T,
                                Scheme scheme, const EvolveOptions& base = {}) {
  EvolveOptions o = base;
  o.keep_states = true;
  return evolve(B0, p, StepperConfig{dt, T, scheme, 1 << 30}, o).states.back();
}

}  // namespace

TEST_CASE("phi functions match closed forms and their Taylor branch") {
  for (double z : {-3.0, -0.5, -1e-3, 1e-3, 0.7}) {
    CHECK(etd_phi1(z) == doctest::Approx(std::expm1(z) / z).epsilon(1e-14));
    CHECK(etd_phi2(z) == doctest::Approx((std::expm1(z) - z) / (z * z)).epsilon(1e-9));
  }
  CHECK(etd_phi1(0.0) == 1.0);
  CHECK(etd_phi2(0.0) == 0.5);
  CHECK(etd_phi1(-2e-5) == doctest::Approx(std::expm1(-2e-5) / -2e-5).epsilon(1e-15));
  CHECK(etd_phi2(-2e-5) == doctest::Approx(0.5 - 2e-5 / 6.0 + 4e-10 / 24.0).epsilon(1e-14));
}

TEST_CASE("heat semigroup multiplies by exp(-t rate(|k|))") {
  const Grid3 g(16);
  const auto B = beltrami_field(g);
  const ModelParams p{0.0, 2.5, 0.7, 0.01};
  CHECK(l2_norm(heat_semigroup(B, 0.3, p) - std::exp(-0.3 * 0.71) * B) < 1e-15);
  const auto R = random_band_field(g, 1, 1, 5);
  CHECK(l2_norm(heat_semigroup(heat_semigroup(R, 0.1, p), 0.2, p) - heat_semigroup(R, 0.3, p)) <
        1e-14 * l2_norm(R));
}

TEST_CASE("Beltrami data decays exactly like exp(-mu t) for both schemes") {
  const Grid3 g(16);
  const auto B0 = beltrami_field(g);
  for (Scheme sc : {Scheme::etd1, Scheme::etd2rk}) {
    const ModelParams p{0.4, 1.5, 1.0, 0.0};
    const auto rec = evolve(B0, p, StepperConfig{1e-2, 1.0, sc, 10});
    for (std::size_t i = 0; i < rec.size(); ++i)
      CHECK(rec.l2[i] == doctest::Approx(std::exp(-rec.times[i]) * rec.l2[0]).epsilon(1e-12));
    CHECK(rec.status == RunStatus::completed);
  }
}

TEST_CASE("snapshot schedule and the short final step") {
  const StepperConfig st{0.01, 0.105, Scheme::etd2rk, 4};
  CHECK(step_count(st) == 11);
  CHECK(step_time(st, 10) == doctest::Approx(0.1));
  CHECK(step_time(st, 11) == 0.105);
  const auto rec = evolve(beltrami_field(Grid3(8)), ModelParams{}, st);
  REQUIRE(rec.size() == 4);
  CHECK(rec.steps == std::vector<long>{0, 4, 8, 11});
  CHECK(rec.times.back() == 0.105);
  CHECK(rec.l2.back() == doctest::Approx(std::exp(-0.105) * rec.l2.front()).epsilon(1e-12));
}

TEST_CASE("self-convergence orders: etd1 first, etd2rk second") {
  const Grid3 g(16);
  const ModelParams p{0.0, 2.25, 1.0, 0.0};
  const auto B0 = rescale_to_norm(random_band_field(g, 77, 1, 4), p.sigma_c(), 0.5);
  const double T = 0.2;
  for (Scheme sc : {Scheme::etd1, Scheme::etd2rk}) {
    const auto a = final_state(B0, p, T / 8, T, sc);
    const auto b = final_state(B0, p, T / 16, T, sc);
    const auto c = final_state(B0, p, T / 32, T, sc);
    const double order = std::log2(l2_norm(a - b) / l2_norm(b - c));
    CAPTURE(to_string(sc));
    CHECK(order == doctest::Approx(sc == Scheme::etd1 ? 1.0 : 2.0).epsilon(0.15));
  }
}

TEST_CASE("frozen q interpolation is piecewise constant from the left") {
  const Grid3 g(8);
  const auto a = beltrami_field(g, 1.0), b = beltrami_field(g, 2.0), c = beltrami_field(g, 3.0);
  const FrozenQ q({0.0, 0.1, 0.2}, {a, b, c});
  CHECK(&q.at(0.05) != &q.at(0.15));
  CHECK(l2_norm(q.at(0.0) - a) == 0.0);
  CHECK(l2_norm(q.at(0.0999) - a) == 0.0);
  CHECK(l2_norm(q.at(0.1) - b) == 0.0);
  CHECK(l2_norm(q.at(0.1 - 1e-13) - b) == 0.0);
  CHECK(l2_norm(q.at(5.0) - c) == 0.0);
  CHECK_THROWS(FrozenQ({0.0, 0.0}, {a, b}));
}

TEST_CASE("frozen zero q gives the heat flow") {
  const Grid3 g(16);
  const ModelParams p{0.0, 2.0, 1.0, 0.0};
  const auto B0 = random_band_field(g, 3, 1, 5);
  const FrozenQ zero({0.0}, {SpectralVectorField(g)});
  EvolveOptions o;
  o.frozen_q = zero.provider();
  const auto B = final_state(B0, p, 0.05, 0.5, Scheme::etd2rk, o);
  CHECK(l2_norm(B - heat_semigroup(B0, 0.5, p)) < 1e-13 * l2_norm(B0));
}

TEST_CASE("blow-up is detected and the partial record survives") {
  const Grid3 g(16);
  const ModelParams p{0.0, 1.2, 1.0, 0.0};
  const auto B0 = rescale_to_norm(random_band_field(g, 5, 1, 5), p.sigma_c(), 1e6);
  try {
    evolve(B0, p, StepperConfig{0.05, 10.0, Scheme::etd2rk, 1});
    FAIL("expected BlowUpError");
  } catch (const BlowUpError& e) {
    REQUIRE(e.partial());
    CHECK(e.partial()->status == RunStatus::blew_up);
    CHECK(e.partial()->size() >= 1);
    CHECK(e.time() > 0.0);
  }
}

TEST_CASE("evolve rejects inadmissible initial data and configs") {
  const Grid3 g(8);
  auto B0 = beltrami_field(g);
  B0(0, g.flatten(1, 0, 0)) = 1.0;
  B0(0, g.flatten(7, 0, 0)) = 1.0;
  CHECK_THROWS_AS(evolve(B0, ModelParams{}, StepperConfig{}), PreconditionError);
  CHECK_THROWS_AS(StepperConfig({0.0, 1.0}).validate(), PreconditionError);
  CHECK_THROWS_AS(StepperConfig({2.0, 1.0}).validate(), PreconditionError);
  CHECK(scheme_from_string("etd1") == Scheme::etd1);
  CHECK_THROWS_AS(scheme_from_string("rk4"), PreconditionError);
}
