#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "esbgk/snapshot.hpp"
#include "support.hpp"

using namespace esbgk;

TEST_SUITE("snapshot") {
  TEST_CASE("binary round trip is exact") {
    const auto dir = test_support::scratch_dir("snapshot");
    const VelocityGrid g = VelocityGrid::build(5.0, 6);
    const SpatialGrid x = SpatialGrid::make(3, 2.0);
    DistributionField F(x, g);
    for (std::size_t k = 0; k < F.values().size(); ++k) F.values()[k] = 1.0 / (k + 3) - 1e-300 * k;

    SnapshotMeta meta{3, 2.0, 5.0, 6, -3.0 / 7.0, 0.123, 17, "abcdef0123456789"};
    const auto [bin, side] = write_snapshot(dir / "state", F, meta);
    CHECK(bin.extension() == ".bin");
    CHECK(side.extension() == ".json");
    CHECK(std::filesystem::file_size(bin) == F.values().size() * sizeof(double));

    SnapshotMeta back;
    const DistributionField G = read_snapshot(bin, x, g, &back);
    CHECK(G.values() == F.values());
    CHECK(back.nu == meta.nu);
    CHECK(back.t == meta.t);
    CHECK(back.step == 17);
    CHECK(back.config_hash == meta.config_hash);
    CHECK(read_snapshot(side, x, g).values() == F.values());
    CHECK(read_snapshot_meta(bin).n_per_axis == 6);
    CHECK(snapshot_meta_from_json(to_json(meta)).length == 2.0);

    SUBCASE("grid mismatch") {
      const VelocityGrid other = VelocityGrid::build(5.0, 8);
      try {
        read_snapshot(bin, x, other);
        FAIL("expected DimensionMismatch");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DimensionMismatch);
      }
    }
    SUBCASE("truncated data") {
      std::filesystem::resize_file(bin, 16);
      try {
        read_snapshot(bin, x, g);
        FAIL("expected Io");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
      }
    }
    SUBCASE("trailing data") {
      std::ofstream(bin, std::ios::app | std::ios::binary) << "x";
      CHECK_THROWS_AS(read_snapshot(bin, x, g), Error);
    }
    SUBCASE("missing sidecar") {
      std::filesystem::remove(side);
      try {
        read_snapshot(bin, x, g);
        FAIL("expected Io");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
      }
    }
  }
}
