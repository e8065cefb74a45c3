#include <cmath>
#include <fstream>

#include "doctest.h"
#include "emhd/checkpoint.hpp"
#include "emhd/config.hpp"
#include "emhd/errors.hpp"
#include "emhd/random_fields.hpp"
#include "emhd/spectral_ops.hpp"
#include "temp_dir.hpp"

using namespace emhd;

namespace {

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("config text round trip is the identity") {
  SimConfig c;
  c.grid_n = 48;
  c.box_length = 3.7;
  c.dealias_cutoff = 14.0;
  c.model = ModelParams{-0.35, 2.8, 0.9, 1e-3};
  c.stepper = StepperConfig{0.1 / 3.0, 1.0, Scheme::etd1, 7};
  c.initial_kind = "power_law_spectrum";
  c.amplitude = 0.123456789012345678;
  c.seed = 18446744073709551615ull;
  c.spectral_slope = 2.5;
  c.alpha = 0.5;
  c.output_dir = "nested/dir";
  c.picard = PicardConfig{9, 1e-9};
  const std::string text = serialize_config(c);
  const SimConfig back = parse_config(text);
  CHECK(back == c);
  CHECK(serialize_config(back) == text);
  CHECK(parse_config(serialize_config(SimConfig{})) == SimConfig{});
}

TEST_CASE("config parser handles comments, blank lines and whitespace") {
  const auto c = parse_config("# header\n\n  grid.n   =  24  # trailing\nmodel.s=0.1\n\tstepper.scheme = etd1\n");
  CHECK(c.grid_n == 24);
  CHECK(c.model.s == 0.1);
  CHECK(c.stepper.scheme == Scheme::etd1);
}

TEST_CASE("config errors carry the offending line") {
  CHECK(error_line("grid.n = 16\nmodel.bogus = 1\n") == 2);
  CHECK(error_line("grid.n = 16\n\ngrid.n = 32\n") == 3);
  CHECK(error_line("model.s 0.1\n") == 1);
  CHECK(error_line("model.s =\n") == 1);
  CHECK(error_line("= 3\n") == 1);
  CHECK(error_line("# c\nmodel.kappa = two\n") == 2);
  CHECK(error_line("grid.n = 16.5\n") == 1);
  CHECK(error_line("stepper.scheme = rk4\n") == 1);
  try {
    parse_config("a\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).rfind("line 1:", 0) == 0);
  }
}

TEST_CASE("config validation rules") {
  SimConfig c;
  c.initial_kind = "random_band";
  CHECK_THROWS_AS(validate_config(c), ConfigError);  // seed missing
  c.seed = 1;
  CHECK_NOTHROW(validate_config(c));
  c.initial_kind = "vortex";
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c.initial_kind = "checkpoint";
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c = SimConfig{};
  c.seed = 1;
  c.stepper.dt = 2.0;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c = SimConfig{};
  c.seed = 1;
  c.window_lo = 0.3;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  CHECK_THROWS_AS(set_config_value(c, "grid.m", "3", 5), ConfigError);
  set_config_value(c, "model.kappa", "2.25");
  CHECK(c.model.kappa == 2.25);
  CHECK(config_keys().front() == "grid.n");
  CHECK(config_keys().back() == "output.dir");
}

TEST_CASE("initial data recipes honour the target critical norm") {
  SimConfig c;
  c.grid_n = 16;
  c.seed = 4;
  c.amplitude = 0.03;
  for (const char* kind : {"random_band", "power_law_spectrum"}) {
    c.initial_kind = kind;
    const auto B = make_initial_field(c);
    CHECK(sobolev_norm(B, c.model.sigma_c()) == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(max_abs(divergence(B)) < 1e-13 * max_abs(B) * B.grid().max_magnitude());
  }
  c.initial_kind = "beltrami";
  c.amplitude = 2.0;
  CHECK(l2_norm(make_initial_field(c) - beltrami_field(Grid3(16), 2.0)) == 0.0);
}

TEST_CASE("checkpoints round trip bit for bit") {
  testing_support::TempDir dir("ckpt");
  const Grid3 g(16, 5.0);
  const auto B = random_band_field(g, 3, 1, 4);
  const auto path = dir.path() / "a.bin";
  write_checkpoint(path, B, ModelParams{0.25, 2.1}, 0.75);
  const auto ck = read_checkpoint(path);
  CHECK(ck.field.grid() == g);
  CHECK(std::equal(B.data().begin(), B.data().end(), ck.field.data().begin()));
  CHECK(ck.s == 0.25);
  CHECK(ck.kappa == 2.1);
  CHECK(ck.time == 0.75);

  SimConfig c;
  c.grid_n = 16;
  c.box_length = 5.0;
  c.initial_kind = "checkpoint";
  c.checkpoint_path = path.string();
  CHECK(l2_norm(make_initial_field(c) - B) == 0.0);
}

TEST_CASE("corrupt checkpoints are rejected") {
  testing_support::TempDir dir("ckpt_bad");
  CHECK_THROWS_AS(read_checkpoint(dir.path() / "missing.bin"), DataError);
  std::ofstream(dir.path() / "junk.bin") << "not a checkpoint";
  CHECK_THROWS_AS(read_checkpoint(dir.path() / "junk.bin"), DataError);

  const auto good = dir.path() / "good.bin";
  write_checkpoint(good, beltrami_field(Grid3(8)), ModelParams{}, 0.0);
  std::filesystem::resize_file(good, std::filesystem::file_size(good) - 16);
  CHECK_THROWS_AS(read_checkpoint(good), DataError);
}
