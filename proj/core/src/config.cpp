#include "emhd/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "emhd/checkpoint.hpp"
#include "emhd/random_fields.hpp"
#include "emhd/spectral_ops.hpp"

namespace emhd {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view key, std::string_view v, int line) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end || !std::isfinite(x))
    throw ConfigError(line, "key '" + std::string(key) + "': expected a real number, got '" +
                                std::string(v) + "'");
  return x;
}

template <class Int>
Int parse_int(std::string_view key, std::string_view v, int line) {
  Int x = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end)
    throw ConfigError(line, "key '" + std::string(key) + "': expected an integer, got '" +
                                std::string(v) + "'");
  return x;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct KeyHandler {
  std::function<void(SimConfig&, std::string_view, int)> set;
  std::function<std::optional<std::string>(const SimConfig&)> get;
};

#define EMHD_DOUBLE_KEY(name, member)                                                              \
  {name,                                                                                           \
   {[](SimConfig& c, std::string_view v, int l) { c.member = parse_double(name, v, l); },         \
    [](const SimConfig& c) -> std::optional<std::string> { return fmt(c.member); }}}
#define EMHD_INT_KEY(name, member, type)                                                           \
  {name,                                                                                           \
   {[](SimConfig& c, std::string_view v, int l) { c.member = parse_int<type>(name, v, l); },      \
    [](const SimConfig& c) -> std::optional<std::string> { return std::to_string(c.member); }}}
#define EMHD_STRING_KEY(name, member)                                                              \
  {name,                                                                                           \
   {[](SimConfig& c, std::string_view v, int) { c.member = std::string(v); },                      \
    [](const SimConfig& c) -> std::optional<std::string> { return c.member; }}}

const std::vector<std::pair<std::string, KeyHandler>>& handlers() {
  static const std::vector<std::pair<std::string, KeyHandler>> table = {
      EMHD_INT_KEY("grid.n", grid_n, int),
      EMHD_DOUBLE_KEY("grid.box_length", box_length),
      {"grid.dealias_cutoff",
       {[](SimConfig& c, std::string_view v, int l) { c.dealias_cutoff = parse_double("grid.dealias_cutoff", v, l); },
        [](const SimConfig& c) -> std::optional<std::string> {
          if (!c.dealias_cutoff) return std::nullopt;
          return fmt(*c.dealias_cutoff);
        }}},
      EMHD_DOUBLE_KEY("model.s", model.s),
      EMHD_DOUBLE_KEY("model.kappa", model.kappa),
      EMHD_DOUBLE_KEY("model.mu", model.mu),
      EMHD_DOUBLE_KEY("model.eps_visc", model.eps_visc),
      EMHD_DOUBLE_KEY("stepper.dt", stepper.dt),
      EMHD_DOUBLE_KEY("stepper.t_end", stepper.t_end),
      {"stepper.scheme",
       {[](SimConfig& c, std::string_view v, int l) {
          try {
            c.stepper.scheme = scheme_from_string(std::string(v));
          } catch (const PreconditionError& e) {
            throw ConfigError(l, e.what());
          }
        },
        [](const SimConfig& c) -> std::optional<std::string> { return to_string(c.stepper.scheme); }}},
      EMHD_INT_KEY("stepper.snapshot_every", stepper.snapshot_every, int),
      EMHD_STRING_KEY("initial.kind", initial_kind),
      EMHD_DOUBLE_KEY("initial.amplitude", amplitude),
      {"initial.seed",
       {[](SimConfig& c, std::string_view v, int l) { c.seed = parse_int<std::uint64_t>("initial.seed", v, l); },
        [](const SimConfig& c) -> std::optional<std::string> {
          if (!c.seed) return std::nullopt;
          return std::to_string(*c.seed);
        }}},
      EMHD_DOUBLE_KEY("initial.band_lo", band_lo),
      EMHD_DOUBLE_KEY("initial.band_hi", band_hi),
      {"initial.spectral_slope",
       {[](SimConfig& c, std::string_view v, int l) { c.spectral_slope = parse_double("initial.spectral_slope", v, l); },
        [](const SimConfig& c) -> std::optional<std::string> {
          if (!c.spectral_slope) return std::nullopt;
          return fmt(*c.spectral_slope);
        }}},
      EMHD_STRING_KEY("initial.checkpoint_path", checkpoint_path),
      EMHD_DOUBLE_KEY("diagnostics.alpha", alpha),
      EMHD_DOUBLE_KEY("diagnostics.delta", delta),
      EMHD_DOUBLE_KEY("diagnostics.eps_rate", eps_rate),
      EMHD_DOUBLE_KEY("diagnostics.window_lo", window_lo),
      EMHD_DOUBLE_KEY("diagnostics.window_hi", window_hi),
      EMHD_INT_KEY("diagnostics.lambda_scale", lambda_scale, int),
      EMHD_INT_KEY("picard.max_outer", picard.max_outer, int),
      EMHD_DOUBLE_KEY("picard.contraction_tol", picard.contraction_tol),
      EMHD_STRING_KEY("output.dir", output_dir),
  };
  return table;
}

#undef EMHD_DOUBLE_KEY
#undef EMHD_INT_KEY
#undef EMHD_STRING_KEY

const KeyHandler* find_handler(std::string_view key) {
  for (const auto& [name, h] : handlers())
    if (name == key) return &h;
  return nullptr;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, h] : handlers()) k.push_back(name);
    return k;
  }();
  return keys;
}

void set_config_value(SimConfig& cfg, std::string_view key, std::string_view value, int line) {
  const KeyHandler* h = find_handler(key);
  if (!h) throw ConfigError(line, "unknown key '" + std::string(key) + "'");
  h->set(cfg, trim(value), line);
}

SimConfig parse_config(std::string_view text) {
  SimConfig cfg;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "missing key before '='");
    if (value.empty()) throw ConfigError(line_no, "missing value for key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second)
      throw ConfigError(line_no, "duplicate key '" + std::string(key) + "'");
    set_config_value(cfg, key, value, line_no);
  }
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const SimConfig& cfg) {
  std::string out;
  for (const auto& [name, h] : handlers()) {
    const auto v = h.get(cfg);
    if (!v || (v->empty())) continue;
    out += name + " = " + *v + "\n";
  }
  return out;
}

void validate_config(const SimConfig& cfg) {
  try {
    make_grid(cfg);
    cfg.model.validate();
    cfg.stepper.validate();
    cfg.picard.validate();
    GevreyParams{cfg.alpha, 0.0, cfg.eps_rate}.validate();
  } catch (const Error& e) {
    throw ConfigError(0, e.what());
  }
  const std::string& k = cfg.initial_kind;
  if (k != "beltrami" && k != "random_band" && k != "power_law_spectrum" && k != "checkpoint")
    throw ConfigError(0, "initial.kind must be beltrami, random_band, power_law_spectrum or checkpoint");
  if ((k == "random_band" || k == "power_law_spectrum") && !cfg.seed)
    throw ConfigError(0, "initial.seed is required for initial.kind = " + k);
  if (k == "checkpoint" && cfg.checkpoint_path.empty())
    throw ConfigError(0, "initial.checkpoint_path is required for initial.kind = checkpoint");
  if (!(cfg.band_lo > 0.0) || !(cfg.band_hi >= cfg.band_lo))
    throw ConfigError(0, "initial band needs 0 < band_lo <= band_hi");
  if (!(cfg.amplitude >= 0.0)) throw ConfigError(0, "initial.amplitude must be nonnegative");
  if (!(cfg.delta > 0.0)) throw ConfigError(0, "diagnostics.delta must be positive");
  if (!(cfg.eps_rate > 0.0)) throw ConfigError(0, "diagnostics.eps_rate must be positive");
  if (!(cfg.window_lo > 0.0 && cfg.window_lo < cfg.window_hi))
    throw ConfigError(0, "diagnostics window needs 0 < window_lo < window_hi");
  if (cfg.lambda_scale < 2) throw ConfigError(0, "diagnostics.lambda_scale must be at least 2");
}

Grid3 make_grid(const SimConfig& cfg) {
  return Grid3(cfg.grid_n, cfg.box_length, cfg.dealias_cutoff.value_or(-1.0));
}

SpectralVectorField make_initial_field(const SimConfig& cfg) {
  validate_config(cfg);
  const Grid3 grid = make_grid(cfg);
  const double sigma_c = cfg.model.sigma_c();
  if (cfg.initial_kind == "beltrami") return beltrami_field(grid, cfg.amplitude);
  if (cfg.initial_kind == "random_band")
    return rescale_to_norm(random_band_field(grid, *cfg.seed, cfg.band_lo, cfg.band_hi), sigma_c,
                           cfg.amplitude);
  if (cfg.initial_kind == "power_law_spectrum") {
    const double slope = cfg.spectral_slope.value_or(sigma_c + 1.5);
    return rescale_to_norm(power_law_field(grid, *cfg.seed, slope, cfg.band_lo, cfg.band_hi), sigma_c,
                           cfg.amplitude);
  }
  const Checkpoint ck = read_checkpoint(cfg.checkpoint_path);
  if (ck.field.grid().n() != grid.n() || ck.field.grid().box_length() != grid.box_length())
    throw ConfigError(0, "checkpoint grid does not match grid.n / grid.box_length");
  SpectralVectorField B(grid, true);
  std::copy(ck.field.data().begin(), ck.field.data().end(), B.data().begin());
  return B;
}

}  // namespace emhd
