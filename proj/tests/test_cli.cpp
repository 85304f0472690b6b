#include <fstream>
#include <sstream>

#include "doctest.h"
#include "esbgk/cli.hpp"
#include "esbgk/config.hpp"
#include "esbgk/snapshot.hpp"
#include "support.hpp"

using namespace esbgk;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args, std::vector<std::string> env = {}) {
  args.insert(args.begin(), "esbgk");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  std::vector<const char*> envp;
  for (auto& e : env) envp.push_back(e.c_str());
  envp.push_back(nullptr);
  return run_cli(static_cast<int>(args.size()), argv.data(), envp.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.cfg";
  std::ofstream(p) << text;
  return p;
}

const char* kSmallRun =
    "v_max = 6\n"
    "n_per_axis = 12\n"
    "n_x = 4\n"
    "nu = -3/7\n"
    "dt = 0.05\n"
    "t_end = 0.5\n"
    "output_every = 2\n"
    "snapshot_every = 5\n"
    "initial = cosine_density\n"
    "amplitude = 0.1\n";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("simulate writes a complete manifest") {
    const fs::path dir = test_support::scratch_dir("cli_simulate");
    const fs::path cfg = write_config(dir, kSmallRun);
    REQUIRE(run({"simulate", "--config", cfg.string(), "--out", (dir / "a").string()}) == kExitOk);
    const json m = read_json(dir / "a" / "manifest.json");
    for (const char* key : {"tool", "version", "command", "config", "config_hash", "seed", "prandtl", "status", "steps",
                            "t_final", "drift", "entropy", "decay", "wall_time_s", "artifacts"})
      CHECK_MESSAGE(m.contains(key), key);
    CHECK(m["status"] == "ok");
    CHECK(m["steps"] == 10);
    CHECK(m["prandtl"].get<double>() == 0.7);
    CHECK(m["drift"]["mass"].get<double>() <= 1e-12);
    CHECK(m["entropy"]["violations"] == 0);
    for (const auto& a : m["artifacts"]) CHECK_MESSAGE(fs::exists(dir / "a" / a.get<std::string>()), a);
    CHECK(fs::exists(dir / "a" / "snapshot_000010.bin"));

    // Same config, different thread count: identical numbers.
    REQUIRE(run({"simulate", "--config", cfg.string(), "--out", (dir / "b").string(), "--threads", "2"}) == kExitOk);
    CHECK(slurp(dir / "a" / "diagnostics.csv") == slurp(dir / "b" / "diagnostics.csv"));
    CHECK(slurp(dir / "a" / "moments_final.csv") == slurp(dir / "b" / "moments_final.csv"));
    CHECK(read_json(dir / "b" / "manifest.json")["config_hash"] == m["config_hash"]);

    // Restart from the final snapshot.
    const fs::path snap = dir / "a" / "snapshot_000010.bin";
    CHECK(read_snapshot_meta(snap).step == 10);
    REQUIRE(run({"simulate", "--config", cfg.string(), "--out", (dir / "c").string(), "--set", "initial=snapshot",
                 "--set", "snapshot_path=" + snap.string(), "--set", "t_end=0.1"}) == kExitOk);
    CHECK(read_json(dir / "c" / "manifest.json")["steps"] == 2);
  }

  TEST_CASE("configuration errors exit with 2") {
    const fs::path dir = test_support::scratch_dir("cli_errors");
    const fs::path cfg = write_config(dir, kSmallRun);
    const std::string out = (dir / "o").string();
    CHECK(run({"simulate", "--config", cfg.string(), "--out", out, "--set", "nu=1"}) == kExitConfig);
    CHECK(run({"simulate", "--config", cfg.string(), "--out", out, "--set", "nu=-0.5"}) == kExitConfig);
    CHECK(run({"simulate", "--config", cfg.string(), "--out", out}, {"ESBGK_AMPLITUDE=2"}) == kExitConfig);
    CHECK(run({"simulate", "--config", cfg.string(), "--out", out, "--set", "dt=1"}) == kExitConfig);
    CHECK(run({"simulate", "--config", (dir / "missing.cfg").string()}) == kExitConfig);
    CHECK(run({"simulate"}) == kExitConfig);
    CHECK(run({"frobnicate"}) == kExitConfig);
    CHECK(run({"decay", "--config", cfg.string(), "--out", out, "--nu-list", ""}) == kExitConfig);
    CHECK(run({"decay", "--config", cfg.string(), "--out", out, "--nu-list", "0,1"}) == kExitConfig);
    CHECK(run({"verify", "jacobians", "--out", out, "--nu-list", "0.5,-0.5"}) == kExitConfig);
    CHECK(run({"verify", "jacobians", "--out", out, "--fd-step", "0.1"}) == kExitConfig);
    CHECK(run({"verify", "nonsense"}) == kExitConfig);
    CHECK_FALSE(fs::exists(dir / "o" / "manifest.json"));
    CHECK(run({"--version"}) == kExitOk);
  }

  TEST_CASE("environment overrides the file and flags override the environment") {
    const fs::path dir = test_support::scratch_dir("cli_env");
    const fs::path cfg = write_config(dir, kSmallRun);
    REQUIRE(run({"simulate", "--config", cfg.string(), "--out", (dir / "a").string()},
                {"ESBGK_T_END=0.1", "ESBGK_NU=0.5"}) == kExitOk);
    json m = read_json(dir / "a" / "manifest.json");
    CHECK(m["steps"] == 2);
    CHECK(m["config"]["nu"].get<double>() == 0.5);
    REQUIRE(run({"simulate", "--config", cfg.string(), "--out", (dir / "b").string(), "--set", "nu=0"},
                {"ESBGK_T_END=0.1", "ESBGK_NU=0.5"}) == kExitOk);
    CHECK(read_json(dir / "b" / "manifest.json")["config"]["nu"].get<double>() == 0.0);
  }

  TEST_CASE("runtime failure exits with 3 and dumps the state") {
    const fs::path dir = test_support::scratch_dir("cli_abort");
    // All the mass of cell 1 on one node: zero temperature, no Gaussian to relax to.
    DistributionField F(SpatialGrid::make(2), test_support::default_grid());
    const Field mu = sample_global_maxwellian(test_support::default_grid());
    std::copy(mu.begin(), mu.end(), F.cell(0).begin());
    F.cell(1)[100] = 1.0 / test_support::default_grid().weight(100);
    SnapshotMeta meta{2, 2 * std::numbers::pi, 8.0, 32, 0.0, 0.0, 0, ""};
    write_snapshot(dir / "bad", F, meta);
    const fs::path cfg = write_config(dir, "n_x = 2\ntransport = none\ndt = 0.1\nt_end = 0.2\ninitial = snapshot\n"
                                           "snapshot_path = " + (dir / "bad.bin").string() + "\n");
    CHECK(run({"simulate", "--config", cfg.string(), "--out", (dir / "o").string()}) == kExitRuntime);
    const json m = read_json(dir / "o" / "manifest.json");
    CHECK(m["status"] == "error");
    CHECK(m.contains("state_dump"));
    CHECK(fs::exists(dir / "o" / "abort_state.bin"));
  }

  TEST_CASE("verify exit codes") {
    const fs::path dir = test_support::scratch_dir("cli_verify");
    CHECK(run({"verify", "jacobians", "--report", (dir / "ok.json").string()}) == kExitOk);
    const json r = read_json(dir / "ok.json");
    CHECK(r.contains("suites"));
    // Too coarse to reproduce the equilibrium Jacobian.
    CHECK(run({"verify", "jacobians", "--v-max", "3", "--n-per-axis", "4", "--report", (dir / "bad.json").string()}) ==
          kExitVerifyFailed);
  }

  TEST_CASE("decay reproduces the unit stress relaxation rate") {
    const fs::path dir = test_support::scratch_dir("cli_decay");
    const fs::path cfg = write_config(dir,
                                      "n_x = 1\ntransport = none\ndt = 0.01\nt_end = 2\n"
                                      "initial = anisotropic_gaussian\ntheta_diag = 1, 1, 1\ntheta_offdiag = 0.1, 0, 0\n");
    REQUIRE(run({"decay", "--config", cfg.string(), "--out", dir.string(), "--nu-list", "0,-3/7"}) == kExitOk);
    const json s = read_json(dir / "decay_summary.json");
    REQUIRE(s["rows"].size() == 2u);
    CHECK(s["rows"][0]["prandtl"].get<double>() == 1.0);
    CHECK(s["rows"][1]["prandtl"].get<double>() == 0.7);
    for (const auto& row : s["rows"]) CHECK(row["stress12_decay"]["rate"].get<double>() == doctest::Approx(1.0).epsilon(0.02));
    CHECK(fs::exists(dir / "decay_table.csv"));
  }
}
