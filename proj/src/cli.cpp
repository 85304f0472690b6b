#include "esbgk/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "esbgk/config.hpp"
#include "esbgk/moments.hpp"
#include "esbgk/snapshot.hpp"
#include "esbgk/sweep.hpp"
#include "esbgk/verification.hpp"

extern char** environ;

namespace esbgk {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool config_required) {
  auto* opt = cmd->add_option("--config", f.config_path, "Config file (JSON or key = value)");
  if (config_required) opt->required();
  cmd->add_option("--out", f.out_dir, "Output directory (overrides out_dir)");
  cmd->add_option("--seed", f.seed, "Seed (overrides seed)");
  cmd->add_option("--threads", f.threads, "Worker threads (overrides threads)")->check(CLI::PositiveNumber);
  cmd->add_option("--set", f.sets, "Override one config key, e.g. --set dt=5e-4 (repeatable)");
}

/// File, then ESBGK_* environment, then flags.
RunConfig resolve_config(const CommonFlags& f, const char* const* envp) {
  json doc = f.config_path.empty() ? json::object() : load_config_document(f.config_path);
  apply_env_overrides(doc, envp);
  for (const std::string& s : f.sets) doc.update(parse_key_value(s));
  if (!f.out_dir.empty()) doc["out_dir"] = f.out_dir;
  if (f.seed) doc["seed"] = *f.seed;
  if (f.threads) doc["threads"] = *f.threads;
  return run_config_from_json(doc);
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

json fit_json(const DecayFit& f) {
  return {{"rate", f.rate}, {"r_squared", f.r_squared}, {"window", {f.window.t_start, f.window.t_end}},
          {"samples", f.samples}};
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::Io, "cannot write " + path.string());
  os << j.dump(2) << '\n';
}

SnapshotMeta snapshot_meta(const RunConfig& cfg, const std::string& hash, int step, double t) {
  SnapshotMeta m;
  m.n_x = cfg.n_x;
  m.length = cfg.length;
  m.v_max = cfg.v_max;
  m.n_per_axis = cfg.n_per_axis;
  m.nu = cfg.solver.nu;
  m.t = t;
  m.step = step;
  m.config_hash = hash;
  return m;
}

int cmd_simulate(const CommonFlags& flags, const char* const* envp) {
  RunConfig cfg;
  try {
    cfg = resolve_config(flags, envp);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  const std::string hash = config_hash(cfg);
  const fs::path out = cfg.out_dir;

  std::optional<VelocityGrid> v_grid;
  std::optional<CollisionBasis> basis;
  DistributionField F0;
  try {
    v_grid = VelocityGrid::build(cfg.v_max, cfg.n_per_axis);
    F0 = make_initial_condition(cfg, *v_grid);
    validate(cfg.solver, F0.x_grid(), *v_grid);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  fs::create_directories(out);
  std::vector<std::string> artifacts;
  const auto start = std::chrono::steady_clock::now();
  json manifest = {{"tool", "esbgk"}, {"version", kVersion}, {"command", "simulate"}, {"config", to_json(cfg)},
                   {"config_hash", hash}, {"seed", cfg.seed}, {"prandtl", prandtl_number(cfg.solver.nu)}};

  std::ofstream csv(out / "diagnostics.csv");
  csv.precision(17);
  csv << series_csv_header() << '\n';
  artifacts.push_back("diagnostics.csv");

  SimulationSinks sinks;
  sinks.on_record = [&](const DiagnosticsRecord& r) { csv << series_csv_row(r) << '\n'; };
  sinks.on_snapshot = [&](int step, double t, const DistributionField& F) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%06d", step);
    write_snapshot(out / name, F, snapshot_meta(cfg, hash, step, t));
    artifacts.push_back(std::string(name) + ".bin");
    artifacts.push_back(std::string(name) + ".json");
  };
  std::string dump;
  sinks.on_abort = [&](int step, double t, const DistributionField& F, const Error&) {
    write_snapshot(out / "abort_state", F, snapshot_meta(cfg, hash, step, t));
    dump = (out / "abort_state.bin").string();
    artifacts.push_back("abort_state.bin");
    artifacts.push_back("abort_state.json");
  };

  try {
    basis = CollisionBasis::build(*v_grid);
    const SimulationResult res = run_simulation(std::move(F0), cfg.solver, *basis, sinks);
    csv.close();

    std::ofstream mcsv(out / "moments_final.csv");
    mcsv.precision(17);
    mcsv << "cell,x," << moment_csv_header() << '\n';
    for (int i = 0; i < res.final_state.n_x(); ++i) {
      const MomentState s = compute_moments(res.final_state.cell(i), *v_grid, cfg.solver.nu);
      mcsv << i << ',' << res.final_state.x_grid().center(i) << ',' << moment_csv_row(s) << '\n';
    }
    artifacts.push_back("moments_final.csv");

    const DiagnosticsSeries& s = res.series;
    const DriftReport d = conservation_drift(s);
    manifest["status"] = "ok";
    manifest["steps"] = res.steps;
    manifest["t_final"] = res.t;
    manifest["drift"] = {{"mass", d.mass}, {"momentum", d.momentum}, {"energy", d.energy}};
    manifest["entropy"] = {{"checks", s.entropy_checks},
                           {"violations", s.entropy_violations},
                           {"max_increase", s.entropy_checks ? s.max_entropy_increase : 0.0},
                           {"violation_steps", s.violation_steps}};
    const auto fit = try_fit_second_half(s.times, s.perturbation_l2);
    manifest["decay"] = fit ? fit_json(*fit) : json(nullptr);
    manifest["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    artifacts.push_back("manifest.json");
    manifest["artifacts"] = artifacts;
    write_json(out / "manifest.json", manifest);

    std::cout << "simulate: " << res.steps << " steps to t = " << res.t << "\n"
              << "  drift mass " << fmt("%.3e", d.mass) << "  momentum " << fmt("%.3e", d.momentum) << "  energy "
              << fmt("%.3e", d.energy) << "\n"
              << "  entropy violations " << s.entropy_violations << " of " << s.entropy_checks << " checks\n"
              << "  artifacts in " << out.string() << '\n';
    return kExitOk;
  } catch (const Error& e) {
    csv.close();
    manifest["status"] = "error";
    manifest["error"] = e.what();
    manifest["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!dump.empty()) manifest["state_dump"] = dump;
    artifacts.push_back("manifest.json");
    manifest["artifacts"] = artifacts;
    write_json(out / "manifest.json", manifest);
    std::cerr << "runtime failure: " << e.what() << '\n';
    if (!dump.empty()) std::cerr << "state dump: " << dump << '\n';
    return kExitRuntime;
  }
}

struct VerifyFlags {
  std::string suite = "all";
  std::string config_path;
  std::string out_dir = "out";
  std::string report;
  std::string nu_list;
  std::optional<double> v_max;
  std::optional<int> n_per_axis;
  std::optional<std::uint64_t> seed;
  std::optional<int> fields, states;
  std::optional<double> h;
};

int cmd_verify(const VerifyFlags& f, const char* const* envp) {
  VerifyOptions opts;
  double v_max = 8.0;
  int n = 32;
  try {
    if (!f.config_path.empty()) {
      CommonFlags cf;
      cf.config_path = f.config_path;
      const RunConfig cfg = resolve_config(cf, envp);
      v_max = cfg.v_max;
      n = cfg.n_per_axis;
      opts.seed = cfg.seed;
    }
    if (f.v_max) v_max = *f.v_max;
    if (f.n_per_axis) n = *f.n_per_axis;
    if (f.seed) opts.seed = *f.seed;
    if (f.fields) opts.fields = *f.fields;
    if (f.states) opts.states = *f.states;
    if (f.h) {
      if (!(*f.h > 0.0 && *f.h <= 1e-3)) throw Error(ErrorKind::ConfigInvalid, "field 'fd-step': must lie in (0, 1e-3]");
      opts.h = *f.h;
    }
    if (!f.nu_list.empty()) {
      opts.nu_list = parse_number_list(f.nu_list, "nu_list");
      if (opts.nu_list.empty()) throw Error(ErrorKind::ConfigInvalid, "field 'nu_list': empty");
    }
    for (double nu : opts.nu_list)
      if (!(nu > -0.5 && nu < 1.0))
        throw Error(ErrorKind::ConfigInvalid, "field 'nu_list': " + std::to_string(nu) +
                                                  " is outside the open interval (-1/2, 1)");
    if (opts.fields < 1 || opts.states < 1)
      throw Error(ErrorKind::ConfigInvalid, "field 'fields'/'states': must be >= 1");
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  std::optional<VelocityGrid> grid;
  try {
    grid = VelocityGrid::build(v_max, n);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const CollisionBasis basis = CollisionBasis::build(*grid);
    const auto reports = run_verification(f.suite, basis, opts);
    json report = verification_report_json(reports, opts);
    report["v_max"] = v_max;
    report["n_per_axis"] = n;
    report["version"] = kVersion;
    const fs::path path = f.report.empty() ? fs::path(f.out_dir) / "verify_report.json" : fs::path(f.report);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_json(path, report);

    bool pass = true;
    for (const SuiteReport& r : reports) {
      std::cout << "[" << r.suite << "]\n";
      for (const CheckResult& c : r.checks)
        std::cout << "  " << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << fmt("%.3e", c.measured)
                  << " (tol " << fmt("%.1e", c.tolerance) << ")\n";
      pass = pass && r.pass();
    }
    std::cout << "report: " << path.string() << '\n';
    return pass ? kExitOk : kExitVerifyFailed;
  } catch (const Error& e) {
    std::cerr << "runtime failure: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_decay(const CommonFlags& flags, const std::string& nu_text, const char* const* envp) {
  RunConfig cfg;
  std::vector<double> nu_list;
  std::optional<VelocityGrid> grid;
  DistributionField F0;
  try {
    cfg = resolve_config(flags, envp);
    nu_list = parse_number_list(nu_text, "nu_list");
    if (nu_list.empty()) throw Error(ErrorKind::ConfigInvalid, "field 'nu_list': at least one value is required");
    for (double nu : nu_list)
      if (!(nu > -0.5 && nu < 1.0))
        throw Error(ErrorKind::ConfigInvalid, "field 'nu_list': " + std::to_string(nu) +
                                                  " is outside the open interval (-1/2, 1)");
    grid = VelocityGrid::build(cfg.v_max, cfg.n_per_axis);
    F0 = make_initial_condition(cfg, *grid);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    const CollisionBasis basis = CollisionBasis::build(*grid);
    const SweepReport rep = nu_sweep_report(cfg, nu_list, F0, basis);
    const fs::path out = cfg.out_dir;
    fs::create_directories(out);
    {
      std::ofstream csv(out / "decay_table.csv");
      write_sweep_csv(csv, rep);
    }
    json summary = to_json(rep);
    summary["version"] = kVersion;
    summary["config"] = to_json(cfg);
    summary["config_hash"] = config_hash(cfg);
    summary["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    summary["artifacts"] = {"decay_table.csv", "decay_summary.json"};
    write_json(out / "decay_summary.json", summary);

    std::cout << "      nu        Pr   mass drift  entropy viol   decay rate      r^2  status\n";
    for (const SweepRow& r : rep.rows) {
      char line[256];
      std::snprintf(line, sizeof line, "%8.5f  %8.5f  %11.3e  %12zu  %11s  %7s  %s\n", r.nu, r.prandtl, r.drift.mass,
                    r.entropy_violations, r.decay_fitted ? fmt("%.5f", r.decay.rate).c_str() : "-",
                    r.decay_fitted ? fmt("%.4f", r.decay.r_squared).c_str() : "-", r.status.c_str());
      std::cout << line;
      if (r.stress_fitted)
        std::cout << "          Theta_12 rate " << fmt("%.5f", r.stress.rate) << " (r^2 "
                  << fmt("%.4f", r.stress.r_squared) << ")\n";
    }
    std::cout << "table: " << (out / "decay_table.csv").string() << '\n';
    return rep.all_ok() ? kExitOk : kExitRuntime;
  } catch (const Error& e) {
    std::cerr << "runtime failure: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace

int run_cli(int argc, char** argv, const char* const* envp) {
  if (!envp) envp = environ;
  CLI::App app{"ES-BGK kinetic solver and verification suite"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Run a simulation from a config file");
  add_common(simulate, sim, true);

  VerifyFlags ver;
  auto* verify = app.add_subcommand("verify", "Run invariant checks and write a JSON report");
  verify->add_option("suite", ver.suite, "projections | coercivity | jacobians | gaussian | all")
      ->check(CLI::IsMember({"projections", "coercivity", "jacobians", "gaussian", "all"}));
  verify->add_option("--config", ver.config_path, "Config file supplying grid parameters and seed");
  verify->add_option("--out", ver.out_dir, "Directory for verify_report.json");
  verify->add_option("--report", ver.report, "Explicit report path");
  verify->add_option("--nu-list", ver.nu_list, "Comma-separated nu values, fractions allowed");
  verify->add_option("--v-max", ver.v_max, "Velocity half-width");
  verify->add_option("--n-per-axis", ver.n_per_axis, "Velocity nodes per axis");
  verify->add_option("--seed", ver.seed, "Seed for random fields");
  verify->add_option("--fields", ver.fields, "Random perturbations per check");
  verify->add_option("--states", ver.states, "Random non-negative states for equivalence bounds");
  verify->add_option("--fd-step", ver.h, "Finite-difference step");
  int verify_threads = 1;
  verify->add_option("--threads", verify_threads, "Accepted for symmetry; checks run sequentially");

  CommonFlags dec;
  std::string nu_text;
  auto* decay = app.add_subcommand("decay", "Sweep nu over identical initial data and fit decay rates");
  add_common(decay, dec, true);
  decay->add_option("--nu-list", nu_text, "Comma-separated nu values, fractions allowed")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*simulate) return cmd_simulate(sim, envp);
    if (*verify) return cmd_verify(ver, envp);
    if (*decay) return cmd_decay(dec, nu_text, envp);
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace esbgk
