#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "emhd/config.hpp"
#include "emhd/stepper.hpp"

namespace emhd::io {

using nlohmann::ordered_json;

/// $EMHD_OUTPUT_ROOT, or ./emhd_runs when unset.
std::filesystem::path output_root();

/// Absolute output.dir as given; a relative or empty one lives under the
/// output root (empty uses the command name).
std::filesystem::path resolve_run_dir(const SimConfig& cfg, const std::string& command);

/// JSON number, or null for non-finite values.
ordered_json number(double x);

ordered_json snapshot_json(const RunRecord& rec, std::size_t i);

/// Writes config.cfg, streams series.jsonl and checkpoints, and finally
/// record.json and the two report files.
class RunWriter {
 public:
  RunWriter(std::filesystem::path dir, const SimConfig& cfg, std::string command);

  const std::filesystem::path& dir() const noexcept { return dir_; }

  void append_snapshot(const RunRecord& rec, const SpectralVectorField& state, bool checkpoint);
  void write_record(const RunRecord& rec, const ordered_json& extra = ordered_json::object());
  void write_report(const std::string& stem, const ordered_json& report);

 private:
  std::filesystem::path dir_;
  std::string command_;
  std::ofstream series_;
  ordered_json snapshots_ = ordered_json::array();
};

/// Aligned `key : value` text for a flat or nested JSON report.
std::string text_report(const ordered_json& report);

struct LoadedRun {
  SimConfig config;
  RunRecord record;
  ordered_json meta;
  std::vector<std::filesystem::path> checkpoints;
};

/// Reads a run directory. Throws DataError when record.json, series.jsonl or
/// config.cfg is missing. States are loaded from the checkpoints on request.
LoadedRun read_run(const std::filesystem::path& dir, bool load_states);

}  // namespace emhd::io
