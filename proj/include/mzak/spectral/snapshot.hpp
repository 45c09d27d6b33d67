#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "mzak/spectral/field.hpp"

namespace mzak {

/// Binary field snapshot:
///
///   offset  size  content
///   0       4     magic "MZAK"
///   4       4     format version (u32, currently 1)
///   8       4     dimension (u32)
///   12      4     points per axis N (u32)
///   16      8     period L (f64)
///   24      1     representation (u8: 0 physical, 1 spectral)
///   25      16*P  values as interleaved (re, im) f64, row-major flat order
///
/// All multi-byte quantities are little endian.
inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 25;

void write_snapshot(std::ostream& out, const Field<double>& field);
Field<double> read_snapshot(std::istream& in);

void write_snapshot(const std::filesystem::path& path, const Field<double>& field);
Field<double> read_snapshot(const std::filesystem::path& path);

namespace io {

void write_u32(std::ostream& out, std::uint32_t v);
void write_u64(std::ostream& out, std::uint64_t v);
void write_f64(std::ostream& out, double v);
std::uint32_t read_u32(std::istream& in);
std::uint64_t read_u64(std::istream& in);
double read_f64(std::istream& in);

}  // namespace io

}  // namespace mzak
