#pragma once

#include <filesystem>

#include "emhd/field.hpp"
#include "emhd/model.hpp"

namespace emhd {

/// Binary checkpoint, little-endian:
///   "EMHD" | version u32 | n u32 | box_length f64 | s f64 | kappa f64 | time f64
/// followed by the three components' coefficients in row-major k-order as
/// interleaved (re, im) f64 pairs.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  SpectralVectorField field;
  double s = 0.0;
  double kappa = 0.0;
  double time = 0.0;
};

void write_checkpoint(const std::filesystem::path& path, const SpectralVectorField& B,
                      const ModelParams& p, double time);

/// Throws DataError on a missing file, bad magic, unknown version or a
/// truncated payload.
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace emhd
