#include "emhd/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace emhd {

namespace {

template <class T>
void put(std::ostream& os, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get(std::istream& is, const std::filesystem::path& path) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T)))
    throw DataError("checkpoint " + path.string() + " is truncated");
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const SpectralVectorField& B,
                      const ModelParams& p, double time) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot write checkpoint " + path.string());
  os.write("EMHD", 4);
  put<std::uint32_t>(os, kCheckpointVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(B.grid().n()));
  put<double>(os, B.grid().box_length());
  put<double>(os, p.s);
  put<double>(os, p.kappa);
  put<double>(os, time);
  for (const Complex& z : B.data()) {
    put<double>(os, z.real());
    put<double>(os, z.imag());
  }
  if (!os) throw DataError("failed writing checkpoint " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open checkpoint " + path.string());
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "EMHD", 4) != 0)
    throw DataError(path.string() + " is not a checkpoint (bad magic)");
  const auto version = get<std::uint32_t>(is, path);
  if (version != kCheckpointVersion)
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  const auto n = get<std::uint32_t>(is, path);
  const double box = get<double>(is, path);
  Checkpoint ck{SpectralVectorField(Grid3(static_cast<int>(n), box), true)};
  ck.s = get<double>(is, path);
  ck.kappa = get<double>(is, path);
  ck.time = get<double>(is, path);
  for (Complex& z : ck.field.data()) {
    const double re = get<double>(is, path);
    const double im = get<double>(is, path);
    z = Complex(re, im);
  }
  return ck;
}

}  // namespace emhd
