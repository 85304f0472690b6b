#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "esbgk/phase_space.hpp"

namespace esbgk {

struct SnapshotMeta {
  int n_x = 0;
  double length = 0;
  double v_max = 0;
  int n_per_axis = 0;
  double nu = 0;
  double t = 0;
  int step = 0;
  std::string config_hash;
};

nlohmann::json to_json(const SnapshotMeta& m);
SnapshotMeta snapshot_meta_from_json(const nlohmann::json& j);

/// Writes `<base>.bin` (little-endian float64, x-major then velocity node index)
/// and the sidecar `<base>.json`. Returns the two paths.
std::pair<std::filesystem::path, std::filesystem::path> write_snapshot(const std::filesystem::path& base,
                                                                       const DistributionField& F,
                                                                       const SnapshotMeta& meta);

/// Reads a snapshot written by write_snapshot. `bin_path` may name either file
/// of the pair. The grids must match the sidecar metadata.
DistributionField read_snapshot(const std::filesystem::path& path, const SpatialGrid& x_grid,
                                const VelocityGrid& v_grid, SnapshotMeta* meta = nullptr);

/// Reads only the sidecar metadata of a snapshot pair.
SnapshotMeta read_snapshot_meta(const std::filesystem::path& path);

}  // namespace esbgk
