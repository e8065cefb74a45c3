#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "emhd/config.hpp"

namespace emhd {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int blow_up = 2;
inline constexpr int config_error = 3;
inline constexpr int non_contraction = 4;
}  // namespace exit_code

/// Evolves the configured datum and writes config.cfg, series.jsonl,
/// checkpoints/, record.json and report.{json,txt} into the run directory.
/// Returns 0 on completion, 2 on blow-up and 3 on configuration errors.
int cmd_run(const SimConfig& cfg, std::ostream& out, std::ostream& err);

/// Picard iteration of the configured datum; writes trace.csv next to the
/// run files. Returns 4 when the iteration does not contract.
int cmd_picard(const SimConfig& cfg, std::ostream& out, std::ostream& err);

/// One row per value along `axis` (amplitude, s or kappa); writes sweep.csv
/// and echoes it to `out`.
int cmd_sweep(const SimConfig& cfg, const std::string& axis, const std::vector<double>& values,
              std::ostream& out, std::ostream& err);

/// Runs one diagnostic (gevrey, decay, energy, scaling, stability) on a run
/// directory and writes analysis_<which>.{json,txt} there. Returns 3 when
/// the record is missing and 1 when the diagnostic fails.
int cmd_analyze(const std::filesystem::path& record_dir, const std::string& which,
                std::ostream& out, std::ostream& err);

}  // namespace emhd
