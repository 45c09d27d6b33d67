#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "mzak/dynamics/state.hpp"

namespace mzak {

/// Checkpoint file:
///
///   offset  size  content
///   0       4     magic "MZCP"
///   4       4     format version (u32, currently 1)
///   8       8     t (f64)
///   16      8     step index (u64)
///   24      8     config hash (u64)
///   32      4     geometry dimension (u32)
///   36      24    e (3 x f64)
///   60      ...   snapshots of phi, chi_+, chi_- in that order
///
/// Little endian throughout. Values are stored bit for bit, so resuming reproduces
/// an uninterrupted run exactly.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  State state;
  std::uint64_t step = 0;
  std::uint64_t config_hash = 0;
};

void write_checkpoint(std::ostream& out, const Checkpoint& cp);
Checkpoint read_checkpoint(std::istream& in);

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& cp);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace mzak
