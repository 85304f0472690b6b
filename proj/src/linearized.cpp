#include "esbgk/linearized.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "esbgk/anisotropic_gaussian.hpp"
#include "esbgk/moments.hpp"

namespace esbgk {

Field to_perturbation(std::span<const double> F, const CollisionBasis& basis) {
  const Field& mu = basis.mu();
  const Field& sq = basis.sqrt_mu();
  if (F.size() != mu.size()) throw Error(ErrorKind::LengthMismatch, "field does not match the grid");
  Field f(F.size());
  for (std::size_t k = 0; k < F.size(); ++k) f[k] = (F[k] - mu[k]) / sq[k];
  return f;
}

Field from_perturbation(std::span<const double> f, const CollisionBasis& basis) {
  const Field& mu = basis.mu();
  const Field& sq = basis.sqrt_mu();
  if (f.size() != mu.size()) throw Error(ErrorKind::LengthMismatch, "field does not match the grid");
  Field F(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) F[k] = mu[k] + sq[k] * f[k];
  return F;
}

Field project_P0(std::span<const double> f, const CollisionBasis& basis) {
  return basis.project(f, CollisionBasis::kInvariantSpan);
}

Field project_P1(std::span<const double> f, const CollisionBasis& basis) {
  return basis.project(f, CollisionBasis::kTraceFreeSpan);
}

Field project_P2(std::span<const double> f, const CollisionBasis& basis) {
  return basis.project(f, CollisionBasis::kOffDiagonalSpan);
}

Field project_Pnu(std::span<const double> f, double nu, const CollisionBasis& basis) {
  Field out = project_P0(f, basis);
  const Field p1 = project_P1(f, basis);
  const Field p2 = project_P2(f, basis);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += nu * (p1[k] + p2[k]);
  return out;
}

Field apply_Lnu(std::span<const double> f, double nu, const CollisionBasis& basis) {
  require_nu_in_range(nu);
  Field out = project_Pnu(f, nu, basis);
  const double s = 1.0 / (1.0 - nu);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (out[k] - f[k]) * s;
  return out;
}

double coercivity_constant(double nu) { return std::min(1.0, (1.0 - std::abs(nu)) / (1.0 - nu)); }

CoercivityGap coercivity_gap(std::span<const double> f, double nu, const CollisionBasis& basis) {
  require_nu_in_range(nu);
  const VelocityGrid& grid = basis.grid();
  CoercivityGap g;
  g.constant = coercivity_constant(nu);
  const Field Lf = apply_Lnu(f, nu, basis);
  g.lhs = inner_product(grid, Lf, f);
  Field micro = project_P0(f, basis);
  for (std::size_t k = 0; k < micro.size(); ++k) micro[k] = f[k] - micro[k];
  g.rhs = -g.constant * inner_product(grid, micro, micro);
  return g;
}

MacroCoefficients macro_coefficients(std::span<const double> f, const CollisionBasis& basis) {
  const VelocityGrid& grid = basis.grid();
  const Field& sq = basis.sqrt_mu();
  if (f.size() != grid.size()) throw Error(ErrorKind::LengthMismatch, "field does not match the grid");
  const auto m = accumulate_blocked<5>(f.size(), [&](std::size_t k, std::array<double, 5>& p) {
    const double wf = grid.weight(k) * f[k] * sq[k];
    const Vec3& v = grid.node(k);
    p[0] += wf;
    p[1] += wf * v[0];
    p[2] += wf * v[1];
    p[3] += wf * v[2];
    p[4] += wf * norm2(v);
  });
  return {m[0], {m[1], m[2], m[3]}, m[4]};
}

Field macro_projection(std::span<const double> f, const CollisionBasis& basis,
                       std::array<double, 5>* span_coefficients) {
  const VelocityGrid& grid = basis.grid();
  const std::array<Field, 5> phi = basis.invariants();
  Eigen::Matrix<double, 5, 5> gram;
  for (int a = 0; a < 5; ++a)
    for (int b = a; b < 5; ++b) gram(a, b) = gram(b, a) = inner_product(grid, phi[a], phi[b]);

  const MacroCoefficients m = macro_coefficients(f, basis);
  Eigen::Matrix<double, 5, 1> rhs;
  rhs << m.a, m.b[0], m.b[1], m.b[2], m.c;

  const Eigen::LDLT<Eigen::Matrix<double, 5, 5>> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 1e-12 * ldlt.vectorD().maxCoeff())
    throw Error(ErrorKind::SingularGram, "collision-invariant Gram matrix is numerically singular");
  const Eigen::Matrix<double, 5, 1> coef = ldlt.solve(rhs);

  Field out(f.size(), 0.0);
  for (int a = 0; a < 5; ++a)
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += coef[a] * phi[a][k];
  if (span_coefficients)
    for (int a = 0; a < 5; ++a) (*span_coefficients)[a] = coef[a];
  return out;
}

std::vector<std::array<double, CollisionBasis::kSize>> micro_macro_residual(
    std::span<const double> f_t, std::span<const double> f, const CollisionBasis& basis,
    const SpatialGrid& x_grid, double nu, bool conservative) {
  require_nu_in_range(nu);
  const VelocityGrid& grid = basis.grid();
  const std::size_t nv = grid.size();
  const std::size_t total = static_cast<std::size_t>(x_grid.n_x) * nv;
  if (f.size() != total || f_t.size() != total)
    throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(total) + " phase-space values");

  const auto cell = [nv](std::span<const double> a, int i) { return a.subspan(static_cast<std::size_t>(i) * nv, nv); };

  // Split f and f_t into macroscopic and microscopic parts cell by cell.
  std::vector<Field> Pf(x_grid.n_x), Pft(x_grid.n_x);
  for (int i = 0; i < x_grid.n_x; ++i) {
    Pf[i] = macro_projection(cell(f, i), basis);
    Pft[i] = macro_projection(cell(f_t, i), basis);
  }

  const double inv2dx = 1.0 / (2.0 * x_grid.dx());
  std::vector<std::array<double, CollisionBasis::kSize>> out(x_grid.n_x);
  Field lhs(nv), rhs(nv), micro(nv), residual(nv);
  for (int i = 0; i < x_grid.n_x; ++i) {
    const int ip = x_grid.wrap(i + 1), im = x_grid.wrap(i - 1);
    const auto fi = cell(f, i), fti = cell(f_t, i), fp = cell(f, ip), fm = cell(f, im);

    for (std::size_t k = 0; k < nv; ++k) {
      const double v1 = grid.node(k)[0];
      const double dPf = (Pf[ip][k] - Pf[im][k]) * inv2dx;
      const double dMicro = ((fp[k] - Pf[ip][k]) - (fm[k] - Pf[im][k])) * inv2dx;
      lhs[k] = Pft[i][k] + v1 * dPf;
      micro[k] = fi[k] - Pf[i][k];
      rhs[k] = -((fti[k] - Pft[i][k]) + v1 * dMicro);
    }
    const Field Lmicro = apply_Lnu(micro, nu, basis);
    const Field Lf = apply_Lnu(fi, nu, basis);

    // Full relaxation term in perturbation variables.
    const Field F = from_perturbation(fi, basis);
    const MomentState s = compute_moments(F, grid, nu);
    Field M = build_gaussian(s, grid);
    if (conservative) M = conservative_correction(M, s, grid).values;
    const double A = collision_frequency(s);
    const Field& sq = basis.sqrt_mu();
    for (std::size_t k = 0; k < nv; ++k) {
      const double relax = A * (M[k] - F[k]) / sq[k];
      const double gamma = relax - Lf[k];
      rhs[k] += Lmicro[k] + gamma;
      residual[k] = lhs[k] - rhs[k];
    }
    out[i] = basis.coefficients(residual);
  }
  return out;
}

std::array<double, 10> macroscopic_map(const std::array<double, 10>& p, double nu) {
  const double rho = p[0];
  const Vec3 U{p[1], p[2], p[3]};
  const Sym3 Tnu{p[4], p[5], p[6], p[7], p[8], p[9]};
  const std::array<double, 6> G = g_nu_from_primitives(rho, U, Tnu, nu);
  return {rho, rho * U[0], rho * U[1], rho * U[2], G[0], G[1], G[2], G[3], G[4], G[5]};
}

namespace {

constexpr std::array<double, 10> kEquilibrium{1, 0, 0, 0, 1, 1, 1, 0, 0, 0};

void require_step(double h) {
  if (!(h > 0.0 && h <= 1e-3))
    throw Error(ErrorKind::InvalidParameter, "finite-difference step must lie in (0, 1e-3]");
}

}  // namespace

JacobianCheck verify_jacobian_at_equilibrium(double nu, double h) {
  require_nu_in_range(nu);
  require_step(h);
  JacobianCheck out;
  for (int c = 0; c < 10; ++c) {
    auto plus = kEquilibrium, minus = kEquilibrium;
    plus[c] += h;
    minus[c] -= h;
    const auto fp = macroscopic_map(plus, nu), fm = macroscopic_map(minus, nu);
    for (int r = 0; r < 10; ++r) {
      out.jacobian[r][c] = (fp[r] - fm[r]) / (2.0 * h);
      const double target = r == c ? (r < 4 ? 1.0 : 0.5) : 0.0;
      out.max_deviation = std::max(out.max_deviation, std::abs(out.jacobian[r][c] - target));
    }
  }
  return out;
}

Field gaussian_derivative_fd(const VelocityGrid& grid, int index, double h) {
  require_step(h);
  const auto eval = [&](double delta) {
    auto p = kEquilibrium;
    p[index] += delta;
    const Sym3 Tnu{p[4], p[5], p[6], p[7], p[8], p[9]};
    return sample_gaussian(GaussianSpec::make(p[0], {p[1], p[2], p[3]}, Tnu), grid);
  };
  const Field fp = eval(h), fm = eval(-h);
  Field d(grid.size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = (fp[k] - fm[k]) / (2.0 * h);
  return d;
}

Field gaussian_derivative_exact(const VelocityGrid& grid, int index) {
  return sample_on_grid(grid, [index](const Vec3& v) {
    const double mu = global_maxwellian(v);
    if (index == 0) return mu;
    if (index < 4) return v[index - 1] * mu;
    if (index < 7) {
      const double vi = v[index - 4];
      return 0.5 * (vi * vi - 1.0) * mu;
    }
    const int i = index - 7, j = (i + 1) % 3;
    return v[i] * v[j] * mu;
  });
}

GaussianDerivativeCheck verify_gaussian_derivatives_at_mu(const VelocityGrid& grid, double h) {
  require_step(h);
  GaussianDerivativeCheck out;
  for (int p = 0; p < 10; ++p) {
    const Field fd = gaussian_derivative_fd(grid, p, h);
    const Field exact = gaussian_derivative_exact(grid, p);
    double worst = 0;
    for (std::size_t k = 0; k < fd.size(); ++k) worst = std::max(worst, std::abs(fd[k] - exact[k]));
    out.max_error[p] = worst;
    out.worst = std::max(out.worst, worst);
  }
  return out;
}

std::vector<FirstVariationRow> verify_first_variation(std::span<const double> f, double nu,
                                                      std::span<const double> eps_list,
                                                      const CollisionBasis& basis) {
  require_nu_in_range(nu);
  const VelocityGrid& grid = basis.grid();
  const Field Pf = project_Pnu(f, nu, basis);
  const Field& mu = basis.mu();
  const Field& sq = basis.sqrt_mu();

  std::vector<FirstVariationRow> rows;
  Field F(grid.size()), r(grid.size());
  for (double eps : eps_list) {
    FirstVariationRow row;
    row.eps = eps;
    if (eps != 0.0) {
      for (std::size_t k = 0; k < F.size(); ++k) F[k] = mu[k] + eps * sq[k] * f[k];
      const MomentState s = compute_moments(F, grid, nu);
      const Field M = build_gaussian(s, grid);
      for (std::size_t k = 0; k < r.size(); ++k) r[k] = (M[k] - mu[k]) / sq[k] - eps * Pf[k];
      row.remainder = l2_norm(grid, r);
    }
    if (!rows.empty() && rows.back().remainder > 0.0) row.ratio = row.remainder / rows.back().remainder;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace esbgk
