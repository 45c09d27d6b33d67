#include "mzak/dynamics/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "mzak/errors.hpp"
#include "mzak/spectral/snapshot.hpp"

namespace mzak {

void write_checkpoint(std::ostream& out, const Checkpoint& cp) {
  const State& s = cp.state;
  out.write("MZCP", 4);
  io::write_u32(out, kCheckpointVersion);
  io::write_f64(out, s.t);
  io::write_u64(out, cp.step);
  io::write_u64(out, cp.config_hash);
  io::write_u32(out, static_cast<std::uint32_t>(s.geometry.dimension));
  for (int a = 0; a < 3; ++a) io::write_f64(out, s.geometry.e[a]);
  write_snapshot(out, s.phi);
  write_snapshot(out, s.chi_plus);
  write_snapshot(out, s.chi_minus);
  if (!out) throw std::runtime_error("failed to write checkpoint");
}

Checkpoint read_checkpoint(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "MZCP", 4) != 0) throw std::runtime_error("not a checkpoint file");
  const auto version = io::read_u32(in);
  if (version != kCheckpointVersion)
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  const double t = io::read_f64(in);
  const std::uint64_t step = io::read_u64(in);
  const std::uint64_t hash = io::read_u64(in);
  Geometry geometry;
  geometry.dimension = static_cast<int>(io::read_u32(in));
  for (int a = 0; a < 3; ++a) geometry.e[a] = io::read_f64(in);
  Fieldd phi = read_snapshot(in);
  Fieldd chi_plus = read_snapshot(in);
  Fieldd chi_minus = read_snapshot(in);
  Checkpoint cp{State{t, std::move(phi), std::move(chi_plus), std::move(chi_minus), geometry}, step,
                hash};
  const auto& g = cp.state.phi.grid();
  if (!(cp.state.chi_plus.grid() == g) || !(cp.state.chi_minus.grid() == g))
    throw StateCorruptionError("checkpoint fields live on different grids");
  if (g.dimension() != cp.state.geometry.dimension)
    throw StateCorruptionError("checkpoint geometry does not match its grid");
  for (const Fieldd* f : {&cp.state.phi, &cp.state.chi_plus, &cp.state.chi_minus})
    if (!f->is_spectral()) throw StateCorruptionError("checkpoint fields must be spectral");
  return cp;
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& cp) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_checkpoint(out, cp);
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace mzak
