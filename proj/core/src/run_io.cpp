#include "run_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "emhd/checkpoint.hpp"

namespace emhd::io {

namespace fs = std::filesystem;

fs::path output_root() {
  if (const char* env = std::getenv("EMHD_OUTPUT_ROOT"); env && *env) return fs::path(env);
  return fs::path("emhd_runs");
}

fs::path resolve_run_dir(const SimConfig& cfg, const std::string& command) {
  if (cfg.output_dir.empty()) return output_root() / command;
  const fs::path p(cfg.output_dir);
  return p.is_absolute() ? p : output_root() / p;
}

ordered_json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

ordered_json snapshot_json(const RunRecord& rec, std::size_t i) {
  ordered_json j;
  j["time"] = rec.times[i];
  j["step"] = rec.steps[i];
  j["l2"] = number(rec.l2[i]);
  j["hs_sigma_c"] = number(rec.hs_sigma_c[i]);
  j["hs_sigma_c_half_kappa"] = number(rec.hs_sigma_c_half_kappa[i]);
  j["h_half_kappa"] = number(rec.h_half_kappa[i]);
  j["dissipation"] = number(rec.dissipation[i]);
  j["lambda_hat"] = number(rec.lambda_hat[i]);
  j["gevrey_r2"] = number(rec.gevrey_r2[i]);
  return j;
}

RunWriter::RunWriter(fs::path dir, const SimConfig& cfg, std::string command)
    : dir_(std::move(dir)), command_(std::move(command)) {
  std::error_code ec;
  fs::create_directories(dir_ / "checkpoints", ec);
  if (ec) throw DataError("cannot create run directory " + dir_.string() + ": " + ec.message());
  for (const char* stale : {"series.jsonl", "record.json"}) fs::remove(dir_ / stale, ec);
  for (const auto& entry : fs::directory_iterator(dir_ / "checkpoints", ec)) fs::remove(entry.path(), ec);
  std::ofstream(dir_ / "config.cfg") << serialize_config(cfg);
  series_.open(dir_ / "series.jsonl", std::ios::trunc);
  if (!series_) throw DataError("cannot write " + (dir_ / "series.jsonl").string());
}

void RunWriter::append_snapshot(const RunRecord& rec, const SpectralVectorField& state, bool checkpoint) {
  const std::size_t i = rec.times.size() - 1;
  series_ << snapshot_json(rec, i).dump() << '\n';
  series_.flush();
  ordered_json entry;
  entry["time"] = rec.times[i];
  entry["step"] = rec.steps[i];
  if (checkpoint) {
    char name[32];
    std::snprintf(name, sizeof name, "ckpt_%06ld.bin", rec.steps[i]);
    const fs::path rel = fs::path("checkpoints") / name;
    write_checkpoint(dir_ / rel, state, rec.params, rec.times[i]);
    entry["checkpoint"] = rel.generic_string();
  }
  snapshots_.push_back(entry);
}

void RunWriter::write_record(const RunRecord& rec, const ordered_json& extra) {
  ordered_json j;
  j["command"] = command_;
  j["status"] = to_string(rec.status);
  j["status_time"] = rec.status_time;
  j["model"] = {{"s", rec.params.s},
                {"kappa", rec.params.kappa},
                {"mu", rec.params.mu},
                {"eps_visc", rec.params.eps_visc},
                {"sigma_c", rec.params.sigma_c()},
                {"admissibility", to_string(check_admissible(rec.params))}};
  j["stepper"] = {{"dt", rec.stepper.dt},
                  {"t_end", rec.stepper.t_end},
                  {"scheme", to_string(rec.stepper.scheme)},
                  {"snapshot_every", rec.stepper.snapshot_every}};
  j["snapshots"] = snapshots_;
  for (const auto& [k, v] : extra.items()) j[k] = v;
  std::ofstream(dir_ / "record.json") << j.dump(2) << '\n';
}

void RunWriter::write_report(const std::string& stem, const ordered_json& report) {
  std::ofstream(dir_ / (stem + ".json")) << report.dump(2) << '\n';
  std::ofstream(dir_ / (stem + ".txt")) << text_report(report);
}

namespace {

void flatten(const ordered_json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, rows);
    return;
  }
  if (j.is_array() && !j.empty() && (j.front().is_object() || j.size() > 8)) {
    rows.emplace_back(prefix, "[" + std::to_string(j.size()) + " entries]");
    return;
  }
  if (j.is_string()) {
    rows.emplace_back(prefix, j.get<std::string>());
    return;
  }
  rows.emplace_back(prefix, j.dump());
}

}  // namespace

std::string text_report(const ordered_json& report) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(report, "", rows);
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  std::ostringstream os;
  for (const auto& [k, v] : rows) os << k << std::string(width - k.size(), ' ') << " : " << v << '\n';
  return os.str();
}

LoadedRun read_run(const fs::path& dir, bool load_states) {
  for (const char* required : {"record.json", "series.jsonl", "config.cfg"})
    if (!fs::exists(dir / required))
      throw DataError("run record incomplete: " + (dir / required).string() + " not found");
  LoadedRun run;
  run.config = load_config(dir / "config.cfg");
  {
    std::ifstream in(dir / "record.json");
    run.meta = ordered_json::parse(in, nullptr, false);
    if (run.meta.is_discarded()) throw DataError("record.json is not valid JSON");
  }
  RunRecord& rec = run.record;
  rec.params = run.config.model;
  rec.stepper = run.config.stepper;
  {
    const Grid3 grid = make_grid(run.config);
    rec.band_max_magnitude = std::sqrt(3.0) * grid.dealias_cutoff() * grid.wavenumber_scale();
  }
  const std::string status = run.meta.value("status", "completed");
  rec.status = status == "blew_up" ? RunStatus::blew_up
               : status == "diverged" ? RunStatus::diverged
                                      : RunStatus::completed;
  rec.status_time = run.meta.value("status_time", 0.0);

  auto value = [](const ordered_json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::numeric_limits<double>::quiet_NaN();
    return it->get<double>();
  };
  std::ifstream series(dir / "series.jsonl");
  std::string line;
  while (std::getline(series, line)) {
    if (line.empty()) continue;
    const auto j = ordered_json::parse(line, nullptr, false);
    if (j.is_discarded()) throw DataError("series.jsonl holds a malformed line");
    rec.times.push_back(value(j, "time"));
    rec.steps.push_back(j.value("step", 0L));
    rec.l2.push_back(value(j, "l2"));
    rec.hs_sigma_c.push_back(value(j, "hs_sigma_c"));
    rec.hs_sigma_c_half_kappa.push_back(value(j, "hs_sigma_c_half_kappa"));
    rec.h_half_kappa.push_back(value(j, "h_half_kappa"));
    rec.dissipation.push_back(value(j, "dissipation"));
    rec.lambda_hat.push_back(value(j, "lambda_hat"));
    rec.gevrey_r2.push_back(value(j, "gevrey_r2"));
  }
  if (run.meta.contains("snapshots"))
    for (const auto& s : run.meta["snapshots"])
      if (s.contains("checkpoint")) run.checkpoints.push_back(dir / s["checkpoint"].get<std::string>());
  if (load_states) {
    if (run.checkpoints.size() != rec.times.size())
      throw DataError("run has " + std::to_string(run.checkpoints.size()) + " checkpoints for " +
                      std::to_string(rec.times.size()) + " snapshots");
    const Grid3 grid = make_grid(run.config);
    for (const auto& p : run.checkpoints) {
      Checkpoint ck = read_checkpoint(p);
      if (ck.field.grid().n() != grid.n())
        throw DataError("checkpoint " + p.string() + " does not match the run grid");
      SpectralVectorField B(grid, true);
      std::copy(ck.field.data().begin(), ck.field.data().end(), B.data().begin());
      rec.states.push_back(std::move(B));
    }
  }
  return run;
}

}  // namespace emhd::io
