// Acceptance run: one PASS/FAIL line per numbered criterion.
//
//   esbgk_acceptance [--results FILE] [--record-only] [--threads N]
//   esbgk_acceptance --check N --results FILE

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "esbgk/config.hpp"
#include "esbgk/linearized.hpp"
#include "esbgk/snapshot.hpp"
#include "esbgk/sweep.hpp"
#include "esbgk/verification.hpp"

using namespace esbgk;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string summary;
  json detail = json::object();
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

const CheckResult& find(const SuiteReport& r, const std::string& name) {
  for (const CheckResult& c : r.checks)
    if (c.name == name) return c;
  throw std::runtime_error("suite " + r.suite + " has no check " + name);
}

json check_json(const CheckResult& c) {
  return {{"measured", c.measured}, {"tolerance", c.tolerance}, {"pass", c.pass}};
}

Criterion from_checks(int id, std::string title, const SuiteReport& rep, const std::vector<std::string>& names) {
  Criterion c{id, std::move(title), true, "", json::object()};
  for (const std::string& n : names) {
    const CheckResult& r = find(rep, n);
    c.pass = c.pass && r.pass;
    c.detail[n] = check_json(r);
    if (!c.summary.empty()) c.summary += ", ";
    c.summary += n + " " + sci(r.measured) + " (tol " + sci(r.tolerance) + ")";
  }
  return c;
}

// Scaled mismatch of the mass, momentum and energy moments of M and F.
double invariant_mismatch(const Field& M, const Field& F, const VelocityGrid& grid, const MomentState& s) {
  const MomentVector a = discrete_moments(M, grid), b = discrete_moments(F, grid);
  const double theta = s.T + norm2(s.U) / 3.0;
  double worst = std::abs(a[0] - b[0]) / s.rho;
  for (int i = 1; i <= 3; ++i) worst = std::max(worst, std::abs(a[i] - b[i]) / (s.rho * std::sqrt(theta)));
  return std::max(worst, std::abs((a[4] + a[5] + a[6]) - (b[4] + b[5] + b[6])) / (s.rho * theta));
}

struct EntropyAudit {
  std::string run;
  std::size_t checks = 0;
  std::size_t violations = 0;
  double max_increase = 0;
  std::vector<int> steps;
};

EntropyAudit audit(const std::string& run, const DiagnosticsSeries& s, const DistributionField& F,
                   const fs::path& dump_dir) {
  EntropyAudit a{run, s.entropy_checks, s.entropy_violations, s.entropy_checks ? s.max_entropy_increase : 0.0,
                 s.violation_steps};
  if (a.violations > 0) {
    SnapshotMeta m;
    m.n_x = F.n_x();
    m.length = F.x_grid().length;
    m.v_max = F.v_grid().v_max();
    m.n_per_axis = F.v_grid().n_per_axis();
    write_snapshot(dump_dir / ("entropy_violation_" + run), F, m);
  }
  return a;
}

template <class Fn>
auto timed(const char* label, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  auto r = fn();
  std::cerr << "  " << label << " " << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
            << " s\n";
  return r;
}

class Acceptance {
 public:
  Acceptance(int threads, fs::path dump_dir)
      : grid_(VelocityGrid::build(8.0, 32)), basis_(CollisionBasis::build(grid_)), threads_(threads),
        dump_dir_(std::move(dump_dir)) {}

  std::vector<Criterion> run() {
    std::vector<Criterion> out;
    VerifyOptions opts;  // 1000 fields, 1000 states, 20 variation fields, h = 1e-4, full nu sweep

    const SuiteReport proj = timed("projections", [&] { return verify_projections(basis_, opts); });
    out.push_back(from_checks(1, "projection algebra", proj,
                              {"idempotency", "mutual_orthogonality", "p1_plus_p2_projection"}));
    out.push_back(from_checks(2, "raw basis inner products 12 and -6", proj,
                              {"raw_trace_free_self_product_12", "raw_trace_free_cross_product_minus_6"}));

    const SuiteReport coer = timed("coercivity", [&] { return verify_coercivity(basis_, opts); });
    out.push_back(from_checks(3, "coercivity", coer, {"coercivity_constants", "coercivity_inequality", "kernel_equality_case"}));
    out.push_back(from_checks(4, "kernel of L_nu", coer, {"kernel_is_collision_invariants"}));

    const SuiteReport jac = timed("jacobians", [&] { return verify_jacobians(basis_, opts); });
    out.push_back(from_checks(5, "equilibrium Jacobian", jac, {"equilibrium_jacobian"}));
    out.push_back(from_checks(6, "Gaussian derivatives at mu", jac, {"gaussian_derivatives"}));
    out.push_back(from_checks(7, "first variation", jac, {"first_variation_second_order"}));

    const SuiteReport gau = timed("gaussian", [&] { return verify_gaussian(basis_, opts); });
    out.push_back(from_checks(8, "equivalence bounds", gau, {"equivalence_constants_at_minus_3_7", "equivalence_bounds"}));
    out.push_back(cancellation(gau));

    std::vector<EntropyAudit> audits;
    out.push_back(conservation(audits));
    out.push_back(fixed_point(audits));
    Criterion sweep = prandtl(audits);

    Criterion ent{12, "entropy non-increasing", true, "", json::array()};
    std::size_t checks = 0, violations = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (const EntropyAudit& a : audits) {
      checks += a.checks;
      violations += a.violations;
      worst = std::max(worst, a.max_increase);
      ent.detail.push_back({{"run", a.run},
                            {"checks", a.checks},
                            {"violations", a.violations},
                            {"max_increase", a.max_increase},
                            {"violation_steps", a.steps}});
    }
    ent.pass = violations == 0 && checks > 0;
    ent.summary = std::to_string(audits.size()) + " runs, " + std::to_string(checks) + " steps audited, " +
                  std::to_string(violations) + " violations, largest step increase " + sci(worst) + " (tol 1.000e-10)";
    if (violations > 0) ent.summary += ", states dumped to " + dump_dir_.string();
    out.push_back(ent);
    out.push_back(decay_);
    out.push_back(sweep);
    return out;
  }

 private:
  Criterion cancellation(const SuiteReport& gau) {
    Criterion c = from_checks(9, "cancellation property", gau, {"cancellation_raw", "cancellation_conservative"});
    // Deterministic states at the edge of the admissible class: |U| = 0.5 and Tnu eigenvalues reaching 0.5 and 2.
    struct Corner {
      const char* name;
      Vec3 U;
      Sym3 Theta;
    };
    const std::vector<Corner> corners{
        {"isotropic_T2_U_axis", {0.5, 0, 0}, Sym3::diagonal(2, 2, 2)},
        {"isotropic_T2_U_diagonal", {0.5 / std::sqrt(3.0), 0.5 / std::sqrt(3.0), 0.5 / std::sqrt(3.0)},
         Sym3::diagonal(2, 2, 2)},
        {"isotropic_T05_U_axis", {0, 0, 0.5}, Sym3::diagonal(0.5, 0.5, 0.5)},
        {"anisotropic_2_05_05", {0.5, 0, 0}, Sym3::diagonal(2, 0.5, 0.5)},
    };
    double raw = 0, corrected = 0;
    json rows = json::array();
    for (const Corner& k : corners) {
      const Field F = sample_gaussian(GaussianSpec::make(1.0, k.U, k.Theta), grid_);
      double r_raw = 0, r_cor = 0;
      for (double nu : default_nu_sweep()) {
        const MomentState s = compute_moments(F, grid_, nu);
        const auto eig = eigenvalues(s.Tnu);
        if (norm2(s.U) > 0.25 + 1e-12 || eig[0] < 0.5 - 1e-6 || eig[2] > 2.0 + 1e-6) continue;
        const Field M = build_gaussian(s, grid_);
        r_raw = std::max(r_raw, invariant_mismatch(M, F, grid_, s));
        const CorrectionResult cr = conservative_correction(M, s, grid_, kTightCorrection);
        r_cor = std::max(r_cor, invariant_mismatch(cr.values, F, grid_, s));
      }
      rows.push_back({{"state", k.name}, {"raw", r_raw}, {"conservative", r_cor}});
      raw = std::max(raw, r_raw);
      corrected = std::max(corrected, r_cor);
    }
    c.detail["corner_states"] = rows;
    const bool corners_ok = raw <= 1e-7 && corrected <= 1e-12;
    c.pass = c.pass && corners_ok;
    c.summary += ", corner states raw " + sci(raw) + " (tol 1.000e-07) conservative " + sci(corrected) +
                 " (tol 1.000e-12)";
    return c;
  }

  RunConfig base_run(double nu, int n_x, double dt, double t_end) const {
    RunConfig c;
    c.solver.nu = nu;
    c.solver.dt = dt;
    c.solver.t_end = t_end;
    c.solver.threads = threads_;
    c.n_x = n_x;
    return c;
  }

  Criterion conservation(std::vector<EntropyAudit>& audits) {
    // Criterion 10 run, reused for 12 and 13.
    RunConfig cfg = base_run(0.0, 8, 1e-3, 10.0);
    cfg.solver.output_every = 20;
    cfg.initial.kind = InitialKind::CosineDensity;
    cfg.initial.amplitude = 0.01;
    const SimulationResult r =
        timed("conservation run", [&] { return run_simulation(make_initial_condition(cfg, grid_), cfg.solver, basis_); });
    audits.push_back(audit("cosine_density_0.01", r.series, r.final_state, dump_dir_));

    const DriftReport d = conservation_drift(r.series);
    Criterion c{10, "conservation over 1e4 steps", d.mass <= 1e-10 && d.momentum <= 1e-10 && d.energy <= 1e-10 &&
                                                        r.steps == 10000,
                "steps " + std::to_string(r.steps) + ", drift mass " + sci(d.mass) + " momentum " + sci(d.momentum) +
                    " energy " + sci(d.energy) + " (tol 1.000e-10)",
                {{"steps", r.steps}, {"mass", d.mass}, {"momentum", d.momentum}, {"energy", d.energy},
                 {"n_x", cfg.n_x}, {"dt", cfg.solver.dt}}};

    decay_ = {13, "exponential decay of the perturbation", false, "", json::object()};
    try {
      const DecayFit f = fit_decay_rate(r.series.times, r.series.perturbation_l2);
      decay_.pass = f.r_squared >= 0.99 && f.rate > 0;
      decay_.summary = "rate " + sci(f.rate) + " (recorded), r^2 " + sci(f.r_squared) + " (min 0.99), window [" +
                       sci(f.window.t_start) + ", " + sci(f.window.t_end) + "], " + std::to_string(f.samples) +
                       " samples";
      decay_.detail = {{"rate", f.rate}, {"r_squared", f.r_squared}, {"samples", f.samples},
                       {"window", {f.window.t_start, f.window.t_end}}, {"truncated", f.truncated}};
    } catch (const Error& e) {
      decay_.summary = e.what();
    }
    return c;
  }

  Criterion fixed_point(std::vector<EntropyAudit>& audits) {
    Criterion c{11, "equilibrium fixed point and stress relaxation", true, "", json::object()};

    RunConfig cfg = base_run(0.0, 8, 1e-2, 10.0);
    cfg.solver.output_every = 10;
    cfg.solver.snapshot_every = 10;
    const Field& mu = basis_.mu();
    double dev = 0;
    SimulationSinks sinks;
    sinks.on_snapshot = [&](int, double, const DistributionField& F) {
      for (int i = 0; i < F.n_x(); ++i) {
        const auto cell = F.cell(i);
        for (std::size_t k = 0; k < cell.size(); ++k) dev = std::max(dev, std::abs(cell[k] - mu[k]));
      }
    };
    const SimulationResult r = timed("equilibrium run", [&] {
      return run_simulation(make_initial_condition(cfg, grid_), cfg.solver, basis_, sinks);
    });
    audits.push_back(audit("global_maxwellian", r.series, r.final_state, dump_dir_));
    c.pass = dev <= 1e-11 && r.t == 10.0;
    c.summary = "max |F - mu| " + sci(dev) + " (tol 1.000e-11) to t = 10";
    c.detail["max_deviation_from_mu"] = dev;

    json rates = json::array();
    for (double nu : {-3.0 / 7.0, 0.0, 0.5}) {
      RunConfig h = base_run(nu, 1, 5e-3, 3.0);
      h.solver.transport = TransportScheme::None;
      h.initial.kind = InitialKind::AnisotropicGaussian;
      h.initial.theta_diag = {1.1, 0.95, 0.95};
      h.initial.theta_offdiag = {0.1, 0.0, 0.0};
      const SimulationResult hr = run_simulation(make_initial_condition(h, grid_), h.solver, basis_);
      audits.push_back(audit("homogeneous_nu_" + sci(nu), hr.series, hr.final_state, dump_dir_));
      const MomentState s0 = compute_moments(make_initial_condition(h, grid_).cell(0), grid_, nu);
      std::vector<double> mag;
      for (double x : hr.series.stress12) mag.push_back(std::abs(x));
      const DecayFit f = fit_decay_rate(hr.series.times, mag);
      const double oracle = s0.rho * s0.T;
      const double rel = std::abs(f.rate - oracle) / oracle;
      const MomentState s1 = compute_moments(hr.final_state.cell(0), grid_, nu);
      const double iso = std::max({std::abs(s1.Theta.xx - s1.T), std::abs(s1.Theta.yy - s1.T),
                                   std::abs(s1.Theta.zz - s1.T), std::abs(s1.Theta.xy)});
      c.pass = c.pass && rel <= 0.02 && iso < std::abs(s0.Theta.xy);
      rates.push_back({{"nu", nu}, {"rate", f.rate}, {"oracle", oracle}, {"relative_error", rel},
                       {"final_anisotropy", iso}});
      c.summary += ", nu " + sci(nu) + " Theta_12 rate " + sci(f.rate) + " vs rho T " + sci(oracle) + " (rel " +
                   sci(rel) + ", tol 2e-2)";
    }
    c.detail["stress_relaxation"] = rates;
    return c;
  }

  Criterion prandtl(std::vector<EntropyAudit>& audits) {
    RunConfig cfg = base_run(0.0, 8, 1e-2, 1.0);
    cfg.initial.kind = InitialKind::CosineDensity;
    cfg.initial.amplitude = 0.01;
    const std::vector<double> nus{0.0, -3.0 / 7.0, 0.5};
    const SweepReport rep =
        timed("sweep", [&] { return nu_sweep_report(cfg, nus, make_initial_condition(cfg, grid_), basis_); });
    Criterion c{14, "Prandtl metadata", rep.all_ok(), "", to_json(rep)};
    for (const SweepRow& row : rep.rows) {
      c.pass = c.pass && row.prandtl == 1.0 / (1.0 - row.nu) && row.drift.mass <= 1e-10;
      EntropyAudit a{"sweep_nu_" + sci(row.nu), row.entropy_checks, row.entropy_violations, row.max_entropy_increase,
                     {}};
      audits.push_back(a);
      c.summary += (c.summary.empty() ? "" : ", ") + std::string("nu ") + sci(row.nu) + " Pr " + sci(row.prandtl);
    }
    c.pass = c.pass && rep.rows.size() == 3 && rep.rows[0].prandtl == 1.0 && rep.rows[1].prandtl == 0.7;
    return c;
  }

  VelocityGrid grid_;
  CollisionBasis basis_;
  int threads_ = 1;
  fs::path dump_dir_;
  Criterion decay_;
};

void print(const Criterion& c) {
  char head[96];
  std::snprintf(head, sizeof head, "%s criterion %2d: %s", c.pass ? "PASS" : "FAIL", c.id, c.title.c_str());
  std::cout << head << " | " << c.summary << std::endl;
}

json to_json(const Criterion& c) {
  return {{"id", c.id}, {"title", c.title}, {"pass", c.pass}, {"summary", c.summary}, {"detail", c.detail}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ES-BGK acceptance criteria"};
  std::string results;
  bool record_only = false;
  int check = 0;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--results", results, "JSON file with per-criterion results");
  app.add_flag("--record-only", record_only, "Exit 0 once all criteria were evaluated, whatever the outcome");
  app.add_option("--check", check, "Report one criterion from an existing --results file")->check(CLI::Range(1, 14));
  app.add_option("--threads", threads, "Worker threads for the solver runs")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  if (check > 0) {
    if (results.empty()) {
      std::cerr << "--check needs --results\n";
      return 2;
    }
    std::ifstream is(results);
    if (!is) {
      std::cerr << "cannot read " << results << '\n';
      return 2;
    }
    const json j = json::parse(is);
    for (const auto& c : j["criteria"])
      if (c["id"] == check) {
        Criterion r{check, c["title"], c["pass"], c["summary"], c["detail"]};
        print(r);
        return r.pass ? 0 : 1;
      }
    std::cerr << "criterion " << check << " missing from " << results << '\n';
    return 2;
  }

  try {
    const fs::path dump = results.empty() ? fs::current_path() : fs::absolute(results).parent_path();
    Acceptance acc(threads, dump);
    const auto criteria = acc.run();
    bool all = true;
    json j = {{"criteria", json::array()}};
    for (const Criterion& c : criteria) {
      print(c);
      all = all && c.pass;
      j["criteria"].push_back(to_json(c));
    }
    j["all_pass"] = all;
    if (!results.empty()) {
      std::ofstream os(results);
      os << j.dump(2) << '\n';
    }
    std::cout << (all ? "all criteria passed" : "some criteria FAILED") << std::endl;
    return all || record_only ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "acceptance run aborted: " << e.what() << '\n';
    return 3;
  }
}
