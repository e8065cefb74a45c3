// Command-line front end: run, picard, sweep, analyze, verify.

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "emhd/commands.hpp"
#include "emhd/config.hpp"
#include "emhd/errors.hpp"
#include "emhd/verify.hpp"

namespace {

// Every config key becomes a `--<dotted.key>` flag on the subcommands that
// take a configuration. Values stay textual until set_config_value sees them.
struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> overrides;

  void attach(CLI::App& cmd) {
    cmd.add_option("-c,--config", config_path, "configuration file (key = value)");
    for (const auto& key : emhd::config_keys())
      cmd.add_option("--" + key, overrides[key], "override " + key)->group("Config keys");
  }

  // Assembles the configuration; ConfigError propagates to the caller.
  emhd::SimConfig build() const {
    emhd::SimConfig cfg = config_path.empty() ? emhd::SimConfig{} : emhd::load_config(config_path);
    for (const auto& key : emhd::config_keys()) {
      const auto it = overrides.find(key);
      if (it != overrides.end() && !it->second.empty()) emhd::set_config_value(cfg, key, it->second);
    }
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional electron MHD solver and diagnostics on the periodic box"};
  app.require_subcommand(1);

  ConfigFlags run_flags, picard_flags, sweep_flags;

  auto* run = app.add_subcommand("run", "evolve one configuration and write its record");
  run_flags.attach(*run);

  auto* picard = app.add_subcommand("picard", "Picard iteration with convergence trace");
  picard_flags.attach(*picard);

  auto* sweep = app.add_subcommand("sweep", "one run per value along an axis; writes sweep.csv");
  sweep_flags.attach(*sweep);
  std::string axis = "amplitude";
  std::vector<double> values;
  sweep->add_option("--axis", axis, "amplitude, s or kappa")
      ->check(CLI::IsMember({"amplitude", "s", "kappa"}));
  sweep->add_option("--values", values, "axis values (comma separated or repeated)")->delimiter(',');

  auto* analyze = app.add_subcommand("analyze", "run one diagnostic on a record directory");
  std::string record_dir, which;
  analyze->add_option("record", record_dir, "run directory holding record.json")->required();
  analyze->add_option("which", which, "gevrey, decay, energy, scaling or stability")
      ->required()
      ->check(CLI::IsMember({"gevrey", "decay", "energy", "scaling", "stability"}));

  auto* verify = app.add_subcommand("verify", "invariant suites with PASS/FAIL per check");
  std::string level = "fast";
  std::optional<double> plateau;
  std::uint64_t seed = emhd::VerifyOptions{}.seed;
  verify->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  verify->add_option("--seed", seed, "base seed for the random fields");
  verify->add_option("--cutoff-plateau", plateau,
                     "inner radius of the cutoff plateau (mutation probe; default 0.75)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? emhd::exit_code::ok : emhd::exit_code::config_error;
  }

  try {
    if (*run) return emhd::cmd_run(run_flags.build(), std::cout, std::cerr);
    if (*picard) return emhd::cmd_picard(picard_flags.build(), std::cout, std::cerr);
    if (*sweep) return emhd::cmd_sweep(sweep_flags.build(), axis, values, std::cout, std::cerr);
    if (*analyze) return emhd::cmd_analyze(record_dir, which, std::cout, std::cerr);
    if (*verify) {
      emhd::VerifyOptions opts;
      opts.level = level == "full" ? emhd::VerifyLevel::full : emhd::VerifyLevel::fast;
      opts.seed = seed;
      if (plateau) opts.profile.plateau = *plateau;
      return emhd::cmd_verify(opts, std::cout);
    }
  } catch (const emhd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return emhd::exit_code::config_error;
  } catch (const emhd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return emhd::exit_code::failure;
  }
  return emhd::exit_code::ok;
}
