#include "esbgk/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace esbgk {

namespace fs = std::filesystem;

namespace {

fs::path with_ext(fs::path p, const char* ext) {
  p.replace_extension(ext);
  return p;
}

std::uint64_t to_little_endian(std::uint64_t x) {
  if constexpr (std::endian::native == std::endian::little) return x;
  std::uint64_t y = 0;
  for (int b = 0; b < 8; ++b) y |= ((x >> (8 * b)) & 0xffu) << (8 * (7 - b));
  return y;
}

}  // namespace

nlohmann::json to_json(const SnapshotMeta& m) {
  return {{"n_x", m.n_x},
          {"length", m.length},
          {"v_max", m.v_max},
          {"n_per_axis", m.n_per_axis},
          {"nu", m.nu},
          {"t", m.t},
          {"step", m.step},
          {"config_hash", m.config_hash},
          {"dtype", "float64-le"},
          {"layout", "x-major; velocity node (i*n+j)*n+l with v_a = -v_max + (a+1/2)*2v_max/n"}};
}

SnapshotMeta snapshot_meta_from_json(const nlohmann::json& j) {
  SnapshotMeta m;
  m.n_x = j.at("n_x").get<int>();
  m.length = j.at("length").get<double>();
  m.v_max = j.at("v_max").get<double>();
  m.n_per_axis = j.at("n_per_axis").get<int>();
  m.nu = j.value("nu", 0.0);
  m.t = j.value("t", 0.0);
  m.step = j.value("step", 0);
  m.config_hash = j.value("config_hash", std::string{});
  return m;
}

std::pair<fs::path, fs::path> write_snapshot(const fs::path& base, const DistributionField& F,
                                             const SnapshotMeta& meta) {
  const fs::path bin = with_ext(base, ".bin"), side = with_ext(base, ".json");
  {
    std::ofstream os(bin, std::ios::binary);
    if (!os) throw Error(ErrorKind::Io, "cannot write " + bin.string());
    for (double x : F.values()) {
      std::uint64_t bits;
      std::memcpy(&bits, &x, sizeof bits);
      bits = to_little_endian(bits);
      os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
    if (!os) throw Error(ErrorKind::Io, "short write to " + bin.string());
  }
  std::ofstream js(side);
  if (!js) throw Error(ErrorKind::Io, "cannot write " + side.string());
  js << to_json(meta).dump(2) << '\n';
  return {bin, side};
}

SnapshotMeta read_snapshot_meta(const fs::path& path) {
  const fs::path side = with_ext(path, ".json");
  std::ifstream js(side);
  if (!js) throw Error(ErrorKind::Io, "cannot open snapshot metadata " + side.string());
  try {
    return snapshot_meta_from_json(nlohmann::json::parse(js));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, "malformed snapshot metadata " + side.string() + ": " + e.what());
  }
}

DistributionField read_snapshot(const fs::path& path, const SpatialGrid& x_grid, const VelocityGrid& v_grid,
                                SnapshotMeta* meta_out) {
  const SnapshotMeta meta = read_snapshot_meta(path);
  if (meta.n_x != x_grid.n_x || meta.n_per_axis != v_grid.n_per_axis() || meta.v_max != v_grid.v_max() ||
      meta.length != x_grid.length)
    throw Error(ErrorKind::DimensionMismatch, "snapshot grids do not match the requested grids");

  const fs::path bin = with_ext(path, ".bin");
  std::ifstream is(bin, std::ios::binary);
  if (!is) throw Error(ErrorKind::Io, "cannot open snapshot " + bin.string());
  DistributionField F(x_grid, v_grid);
  for (double& x : F.values()) {
    std::uint64_t bits;
    if (!is.read(reinterpret_cast<char*>(&bits), sizeof bits))
      throw Error(ErrorKind::Io, "snapshot " + bin.string() + " is truncated");
    bits = to_little_endian(bits);
    std::memcpy(&x, &bits, sizeof x);
  }
  if (is.peek() != std::char_traits<char>::eof())
    throw Error(ErrorKind::Io, "snapshot " + bin.string() + " has trailing data");
  if (meta_out) *meta_out = meta;
  return F;
}

}  // namespace esbgk
