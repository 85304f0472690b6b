#include "esbgk/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "esbgk/anisotropic_gaussian.hpp"
#include "esbgk/linearized.hpp"
#include "esbgk/moments.hpp"
#include "esbgk/random_fields.hpp"

namespace esbgk {

using nlohmann::json;

std::vector<double> default_nu_sweep() { return {-0.49, -3.0 / 7.0, -0.25, 0.0, 0.25, 0.5, 0.75, 0.99}; }

bool SuiteReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

json SuiteReport::to_json() const {
  json out = {{"suite", suite}, {"pass", pass()}, {"checks", json::array()}};
  for (const CheckResult& c : checks)
    out["checks"].push_back(
        {{"name", c.name}, {"pass", c.pass}, {"measured", c.measured}, {"tolerance", c.tolerance}, {"detail", c.detail}});
  return out;
}

namespace {

CheckResult bounded(std::string name, double measured, double tolerance, json detail = json::object()) {
  CheckResult c;
  c.name = std::move(name);
  c.measured = measured;
  c.tolerance = tolerance;
  c.pass = std::isfinite(measured) && measured <= tolerance;
  c.detail = std::move(detail);
  return c;
}

Field diff(std::span<const double> a, std::span<const double> b) {
  Field d(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) d[k] = a[k] - b[k];
  return d;
}

Field sum(std::span<const double> a, std::span<const double> b) {
  Field d(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) d[k] = a[k] + b[k];
  return d;
}

double dist(const VelocityGrid& g, std::span<const double> a, std::span<const double> b) {
  return l2_norm(g, diff(a, b));
}

/// Largest scaled mismatch of the (1, v, |v|^2) moments of two fields.
double invariant_mismatch(std::span<const double> M, std::span<const double> F, const VelocityGrid& grid,
                          const MomentState& s) {
  const MomentVector a = discrete_moments(M, grid);
  const MomentVector b = discrete_moments(F, grid);
  const double theta = s.T + norm2(s.U) / 3.0;
  double worst = std::abs(a[0] - b[0]) / s.rho;
  for (int i = 1; i <= 3; ++i) worst = std::max(worst, std::abs(a[i] - b[i]) / (s.rho * std::sqrt(theta)));
  const double ea = a[4] + a[5] + a[6], eb = b[4] + b[5] + b[6];
  return std::max(worst, std::abs(ea - eb) / (s.rho * theta));
}

}  // namespace

SuiteReport verify_projections(const CollisionBasis& basis, const VerifyOptions& opts) {
  const VelocityGrid& grid = basis.grid();
  SuiteReport rep{"projections", {}};

  double gram = 0;
  const auto G = basis.ortho_gram();
  for (int i = 0; i < CollisionBasis::kSize; ++i)
    for (int j = 0; j < CollisionBasis::kSize; ++j) gram = std::max(gram, std::abs(G[i][j] - (i == j ? 1.0 : 0.0)));
  rep.checks.push_back(bounded("ortho_gram_identity", gram, 1e-12));

  std::array<Field, 3> tf;
  for (int i = 0; i < 3; ++i)
    tf[i] = sample_on_grid(grid, [&](const Vec3& v) {
      return (3.0 * v[i] * v[i] - norm2(v)) * std::sqrt(global_maxwellian(v));
    });
  double self = 0, cross = 0;
  json values = json::array();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double ip = inner_product(grid, tf[i], tf[j]);
      values.push_back(ip);
      if (i == j) self = std::max(self, std::abs(ip - 12.0));
      else cross = std::max(cross, std::abs(ip + 6.0));
    }
  rep.checks.push_back(bounded("raw_trace_free_self_product_12", self, 1e-5, {{"products", values}}));
  rep.checks.push_back(bounded("raw_trace_free_cross_product_minus_6", cross, 1e-5));

  double sum_c = 0;
  const Field c0 = basis.trace_free(0), c1 = basis.trace_free(1), c2 = basis.trace_free(2);
  for (std::size_t k = 0; k < grid.size(); ++k) sum_c = std::max(sum_c, std::abs(c0[k] + c1[k] + c2[k]));
  rep.checks.push_back(bounded("trace_free_family_sums_to_zero", sum_c, 1e-15));

  Rng rng(opts.seed);
  double idem = 0, ortho = 0, p12 = 0, macro_idem = 0, macro_range = 0;
  for (int n = 0; n < opts.fields; ++n) {
    const Field f = random_perturbation(basis, rng);
    const std::array<Field, 3> p{project_P0(f, basis), project_P1(f, basis), project_P2(f, basis)};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const Field pp = i == 0 ? project_P0(p[j], basis) : i == 1 ? project_P1(p[j], basis) : project_P2(p[j], basis);
        if (i == j) idem = std::max(idem, dist(grid, pp, p[i]));
        else ortho = std::max(ortho, l2_norm(grid, pp));
      }
    const Field q = sum(p[1], p[2]);
    p12 = std::max(p12, dist(grid, sum(project_P1(q, basis), project_P2(q, basis)), q));
    const Field m = macro_projection(f, basis);
    macro_idem = std::max(macro_idem, dist(grid, macro_projection(m, basis), m));
    macro_range = std::max(macro_range, dist(grid, project_P0(m, basis), m));
  }
  const json fields = {{"fields", opts.fields}, {"seed", opts.seed}};
  rep.checks.push_back(bounded("idempotency", idem, 1e-12, fields));
  rep.checks.push_back(bounded("mutual_orthogonality", ortho, 1e-12, fields));
  rep.checks.push_back(bounded("p1_plus_p2_projection", p12, 1e-12, fields));
  rep.checks.push_back(bounded("macro_projection_idempotent", macro_idem, 1e-12, fields));
  rep.checks.push_back(bounded("macro_projection_range_is_invariant_span", macro_range, 1e-12, fields));
  return rep;
}

SuiteReport verify_coercivity(const CollisionBasis& basis, const VerifyOptions& opts) {
  const VelocityGrid& grid = basis.grid();
  SuiteReport rep{"coercivity", {}};
  const std::size_t m = opts.nu_list.size();

  json constants = json::array();
  double constant_err = 0;
  for (double nu : opts.nu_list) {
    require_nu_in_range(nu);
    const double expect = nu >= 0 ? 1.0 : (1.0 + nu) / (1.0 - nu);
    constant_err = std::max(constant_err, std::abs(coercivity_constant(nu) - expect));
    constants.push_back({{"nu", nu}, {"constant", coercivity_constant(nu)}});
  }
  rep.checks.push_back(bounded("coercivity_constants", constant_err, 1e-15, {{"per_nu", constants}}));

  std::vector<double> worst(m, -std::numeric_limits<double>::infinity());
  double adj = 0;
  Rng rng(opts.seed + 1);
  Field prev;
  for (int n = 0; n < opts.fields; ++n) {
    const Field f = random_perturbation(basis, rng);
    for (std::size_t i = 0; i < m; ++i) {
      const CoercivityGap g = coercivity_gap(f, opts.nu_list[i], basis);
      worst[i] = std::max(worst[i], g.lhs - g.rhs);
    }
    if (!prev.empty() && n < 100) {
      for (double nu : opts.nu_list) {
        const double a = inner_product(grid, apply_Lnu(f, nu, basis), prev);
        const double b = inner_product(grid, f, apply_Lnu(prev, nu, basis));
        adj = std::max(adj, std::abs(a - b));
      }
    }
    prev = f;
  }
  json per_nu = json::array();
  double overall = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    per_nu.push_back({{"nu", opts.nu_list[i]}, {"max_lhs_minus_rhs", worst[i]}});
    overall = std::max(overall, worst[i]);
  }
  rep.checks.push_back(bounded("coercivity_inequality", overall, 1e-12, {{"fields", opts.fields}, {"per_nu", per_nu}}));
  rep.checks.push_back(bounded("self_adjointness", adj, 1e-12));

  double kernel = 0, kernel_gap = 0;
  std::vector<Field> invariants;
  for (int idx : CollisionBasis::kInvariantSpan) invariants.push_back(basis.ortho()[idx]);
  for (Field phi : basis.invariants()) {
    const double len = l2_norm(grid, phi);
    for (double& x : phi) x /= len;
    invariants.push_back(std::move(phi));
  }
  for (double nu : opts.nu_list)
    for (const Field& phi : invariants) {
      kernel = std::max(kernel, l2_norm(grid, apply_Lnu(phi, nu, basis)));
      const CoercivityGap g = coercivity_gap(phi, nu, basis);
      kernel_gap = std::max({kernel_gap, std::abs(g.lhs), std::abs(g.rhs)});
    }
  rep.checks.push_back(bounded("kernel_is_collision_invariants", kernel, 1e-12));
  rep.checks.push_back(bounded("kernel_equality_case", kernel_gap, 1e-12));
  return rep;
}

SuiteReport verify_jacobians(const CollisionBasis& basis, const VerifyOptions& opts) {
  const VelocityGrid& grid = basis.grid();
  SuiteReport rep{"jacobians", {}};

  double jac = 0;
  json per_nu = json::array();
  for (double nu : opts.jacobian_nu) {
    const JacobianCheck c = verify_jacobian_at_equilibrium(nu, opts.h);
    jac = std::max(jac, c.max_deviation);
    per_nu.push_back({{"nu", nu}, {"max_deviation", c.max_deviation}});
  }
  rep.checks.push_back(bounded("equilibrium_jacobian", jac, 1e-6, {{"h", opts.h}, {"per_nu", per_nu}}));

  const GaussianDerivativeCheck d = verify_gaussian_derivatives_at_mu(grid, opts.h);
  json per_param = json::object();
  for (int i = 0; i < 10; ++i) per_param[kGaussianParameterNames[i]] = d.max_error[i];
  rep.checks.push_back(bounded("gaussian_derivatives", d.worst, 1e-7, {{"h", opts.h}, {"max_error", per_param}}));
  const auto& e = d.max_error;
  const double sym = std::max(std::abs(e[4] - e[5]), std::abs(e[1] - e[2]));
  rep.checks.push_back(bounded("gaussian_derivative_axis_symmetry", sym, 1e-14));

  Rng rng(opts.seed + 2);
  const std::vector<double> eps{1e-2, 5e-3, 2.5e-3};
  double ratio_dev = 0;
  json rows = json::array();
  for (int n = 0; n < opts.variation_fields; ++n) {
    const Field f = random_perturbation(basis, rng);
    const double nu = opts.nu_list[n % opts.nu_list.size()];
    const auto table = verify_first_variation(f, nu, eps, basis);
    json ratios = json::array();
    for (std::size_t r = 1; r < table.size(); ++r) {
      ratio_dev = std::max(ratio_dev, std::abs(table[r].ratio - 0.25));
      ratios.push_back(table[r].ratio);
    }
    rows.push_back({{"nu", nu}, {"remainder_at_1e-2", table[0].remainder}, {"ratios", ratios}});
  }
  rep.checks.push_back(bounded("first_variation_second_order", ratio_dev, 0.05, {{"fields", rows}}));
  return rep;
}

SuiteReport verify_gaussian(const CollisionBasis& basis, const VerifyOptions& opts) {
  const VelocityGrid& grid = basis.grid();
  SuiteReport rep{"gaussian", {}};

  const EquivalenceConstants c37 = equivalence_constants(-3.0 / 7.0);
  rep.checks.push_back(bounded("equivalence_constants_at_minus_3_7",
                               std::max(std::abs(c37.lower - 1.0 / 7.0), std::abs(c37.upper - 10.0 / 7.0)), 1e-15,
                               {{"lower", c37.lower}, {"upper", c37.upper}}));

  Rng rng(opts.seed + 3);
  double bound_slack = -std::numeric_limits<double>::infinity();
  double trace_err = 0, collapse = 0;
  int violations = 0;
  std::string first_violation;
  for (int n = 0; n < opts.states; ++n) {
    const Field F = random_nonnegative_distribution(grid, rng);
    const MomentState base = compute_moments(F, grid, 0.0);
    for (std::size_t i = 0; i < 3; ++i) collapse = std::max(collapse, std::abs(base.Tnu(i, i) - base.T));
    collapse = std::max({collapse, std::abs(base.Tnu.xy), std::abs(base.Tnu.yz), std::abs(base.Tnu.zx)});
    for (double nu : opts.nu_list) {
      const MomentState s = with_nu(base, nu);
      trace_err = std::max({trace_err, std::abs(s.Tnu.trace() - 3.0 * s.T) / (3.0 * s.T),
                            std::abs(s.Theta.trace() - 3.0 * s.T) / (3.0 * s.T)});
      try {
        const EquivalenceReport r = equivalence_bounds(s, opts.directions, opts.seed + static_cast<std::uint64_t>(n));
        bound_slack = std::max({bound_slack, r.constants.lower * r.T - r.min_quotient,
                                r.max_quotient - r.constants.upper * r.T});
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::BoundViolation) throw;
        if (violations++ == 0) first_violation = e.what();
      }
    }
  }
  CheckResult eq = bounded("equivalence_bounds", violations > 0 ? 1.0 : bound_slack, 1e-10,
                           {{"states", opts.states},
                            {"directions", opts.directions},
                            {"max_signed_excess", bound_slack},
                            {"violations", violations}});
  if (!first_violation.empty()) eq.detail["first_violation"] = first_violation;
  rep.checks.push_back(std::move(eq));
  rep.checks.push_back(bounded("trace_identities", trace_err, 1e-12));
  rep.checks.push_back(bounded("nu_zero_collapse", collapse, 0.0));

  double det_err = 0;
  for (int n = 0; n < opts.states; ++n) {
    const Sym3 T = random_spd(rng, 0.1, 3.0);
    const SpdReport r = check_spd_and_det(T);
    det_err = std::max(det_err, std::abs(r.det_closed_form - r.det_factorized) / std::abs(r.det_factorized));
  }
  rep.checks.push_back(bounded("determinant_cofactor_vs_factorized", det_err, 1e-12));

  double raw = 0, corrected = 0, positivity = 1.0;
  int used = 0;
  for (int n = 0; n < opts.gaussian_states;) {
    const GaussianDraw d = random_gaussian_parameters(rng);
    Field F = sample_gaussian(GaussianSpec::make(d.rho, d.U, d.Tnu), grid);
    if (n % 2 == 1) {
      const GaussianDraw e = random_gaussian_parameters(rng, 0.5, 0.5, 1.5);
      const Field G = sample_gaussian(GaussianSpec::make(0.2 * e.rho, e.U, e.Tnu), grid);
      for (std::size_t k = 0; k < F.size(); ++k) F[k] += G[k];
    }
    const int used_before = used;
    for (double nu : opts.nu_list) {
      const MomentState s = compute_moments(F, grid, nu);
      const auto eig = eigenvalues(s.Tnu);
      if (norm2(s.U) > 0.25 || eig[0] < 0.5 || eig[2] > 2.0) continue;
      const Field M = build_gaussian(s, grid);
      raw = std::max(raw, invariant_mismatch(M, F, grid, s));
      const CorrectionResult cr = conservative_correction(M, s, grid, kTightCorrection);
      corrected = std::max(corrected, invariant_mismatch(cr.values, F, grid, s));
      positivity = std::min(positivity, *std::min_element(cr.values.begin(), cr.values.end()));
      ++used;
    }
    if (used > used_before) ++n;
  }
  const json detail = {{"cases", used}};
  rep.checks.push_back(bounded("cancellation_raw", raw, 1e-7, detail));
  rep.checks.push_back(bounded("cancellation_conservative", corrected, 1e-12, detail));
  rep.checks.push_back(
      bounded("corrected_gaussian_positive", positivity > 0.0 ? 0.0 : 1.0, 0.0, {{"min_value", positivity}}));

  const Field& mu = basis.mu();
  const MomentState s = compute_moments(mu, grid, 0.0);
  const Field M = build_gaussian(s, grid);
  double idem = 0;
  for (std::size_t k = 0; k < mu.size(); ++k) idem = std::max(idem, std::abs(M[k] - mu[k]));
  rep.checks.push_back(bounded("equilibrium_idempotency_raw", idem, 1e-7));
  const CorrectionResult cr = conservative_correction(M, s, grid, kTightCorrection);
  rep.checks.push_back(bounded("equilibrium_idempotency_corrected_mass", std::abs(integrate(grid, cr.values) - s.rho), 1e-12));
  return rep;
}

const std::vector<std::string>& verification_suites() {
  static const std::vector<std::string> names{"projections", "coercivity", "jacobians", "gaussian"};
  return names;
}

std::vector<SuiteReport> run_verification(const std::string& suite, const CollisionBasis& basis,
                                          const VerifyOptions& opts) {
  for (double nu : opts.nu_list) require_nu_in_range(nu);
  std::vector<SuiteReport> out;
  const auto run = [&](const std::string& name) {
    if (name == "projections") out.push_back(verify_projections(basis, opts));
    else if (name == "coercivity") out.push_back(verify_coercivity(basis, opts));
    else if (name == "jacobians") out.push_back(verify_jacobians(basis, opts));
    else if (name == "gaussian") out.push_back(verify_gaussian(basis, opts));
    else throw Error(ErrorKind::InvalidParameter, "unknown verification suite '" + name + "'");
  };
  if (suite == "all")
    for (const std::string& name : verification_suites()) run(name);
  else
    run(suite);
  return out;
}

json verification_report_json(const std::vector<SuiteReport>& reports, const VerifyOptions& opts) {
  json out = {{"nu_list", opts.nu_list},
              {"seed", opts.seed},
              {"fields", opts.fields},
              {"h", opts.h},
              {"suites", json::array()}};
  bool pass = true;
  for (const SuiteReport& r : reports) {
    out["suites"].push_back(r.to_json());
    pass = pass && r.pass();
  }
  out["pass"] = pass;
  return out;
}

}  // namespace esbgk
