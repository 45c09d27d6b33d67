#include "mzak/spectral/snapshot.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace mzak {

namespace io {

namespace {

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    return std::bit_cast<T>(bytes);
  } else {
    return v;
  }
}

template <typename T>
void put(std::ostream& out, T v) {
  const auto le = to_little(v);
  out.write(reinterpret_cast<const char*>(&le), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("snapshot truncated");
  return to_little(v);
}

}  // namespace

void write_u32(std::ostream& out, std::uint32_t v) { put(out, v); }
void write_u64(std::ostream& out, std::uint64_t v) { put(out, v); }
void write_f64(std::ostream& out, double v) { put(out, std::bit_cast<std::uint64_t>(v)); }
std::uint32_t read_u32(std::istream& in) { return get<std::uint32_t>(in); }
std::uint64_t read_u64(std::istream& in) { return get<std::uint64_t>(in); }
double read_f64(std::istream& in) { return std::bit_cast<double>(get<std::uint64_t>(in)); }

}  // namespace io

void write_snapshot(std::ostream& out, const Field<double>& field) {
  const auto& g = field.grid();
  out.write("MZAK", 4);
  io::write_u32(out, kSnapshotVersion);
  io::write_u32(out, static_cast<std::uint32_t>(g.dimension()));
  io::write_u32(out, static_cast<std::uint32_t>(g.points_per_axis()));
  io::write_f64(out, g.period());
  const auto rep = static_cast<std::uint8_t>(field.representation());
  out.write(reinterpret_cast<const char*>(&rep), 1);
  for (const auto& z : field.values()) {
    io::write_f64(out, z.real());
    io::write_f64(out, z.imag());
  }
  if (!out) throw std::runtime_error("failed to write snapshot");
}

Field<double> read_snapshot(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "MZAK", 4) != 0) throw std::runtime_error("not a field snapshot");
  const auto version = io::read_u32(in);
  if (version != kSnapshotVersion)
    throw std::runtime_error("unsupported snapshot version " + std::to_string(version));
  const auto dim = static_cast<int>(io::read_u32(in));
  const auto n = static_cast<int>(io::read_u32(in));
  const double period = io::read_f64(in);
  std::uint8_t rep = 0;
  in.read(reinterpret_cast<char*>(&rep), 1);
  if (!in || rep > 1) throw std::runtime_error("bad snapshot representation tag");
  Field<double> field(Grid<double>(dim, n, period), static_cast<Representation>(rep));
  for (auto& z : field.values()) {
    const double re = io::read_f64(in);
    const double im = io::read_f64(in);
    z = {re, im};
  }
  return field;
}

void write_snapshot(const std::filesystem::path& path, const Field<double>& field) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_snapshot(out, field);
}

Field<double> read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_snapshot(in);
}

}  // namespace mzak
