#include "esbgk/moments.hpp"

#include <random>
#include <sstream>

#include "esbgk/errors.hpp"

namespace esbgk {

Sym3 temperature_tensor(double T, const Sym3& Theta, double nu) {
  return {(1.0 - nu) * T + nu * Theta.xx,
          (1.0 - nu) * T + nu * Theta.yy,
          (1.0 - nu) * T + nu * Theta.zz,
          nu * Theta.xy,
          nu * Theta.yz,
          nu * Theta.zx};
}

std::array<double, 6> g_nu(double rho, const Vec3& U, double T, const Sym3& Theta, double nu) {
  const double iso = (1.0 - nu) / 3.0 * (3.0 * rho * T + rho * norm2(U)) / 2.0 - rho / 2.0;
  const Sym3 aniso = (rho * Theta + rho * Sym3::outer(U)) * (nu / 2.0);
  return {iso + aniso.xx, iso + aniso.yy, iso + aniso.zz, aniso.xy, aniso.yz, aniso.zx};
}

std::array<double, 6> g_nu_from_primitives(double rho, const Vec3& U, const Sym3& Tnu, double nu) {
  const double iso = (1.0 - nu) * rho * norm2(U) / 6.0 - rho / 2.0;
  const Sym3 g = Tnu * (rho / 2.0) + Sym3::outer(U) * (nu * rho / 2.0);
  return {g.xx + iso, g.yy + iso, g.zz + iso, g.xy, g.yz, g.zx};
}

MomentState compute_moments(std::span<const double> F, const VelocityGrid& grid, double nu) {
  require_nu_in_range(nu);
  if (F.size() != grid.size())
    throw Error(ErrorKind::LengthMismatch, "distribution does not match the velocity grid");

  MomentState s;
  s.nu = nu;
  const auto first = accumulate_blocked<4>(F.size(), [&](std::size_t k, std::array<double, 4>& p) {
    const double wf = grid.weight(k) * F[k];
    const Vec3& v = grid.node(k);
    p[0] += wf;
    p[1] += wf * v[0];
    p[2] += wf * v[1];
    p[3] += wf * v[2];
  });
  for (double x : F)
    if (x < kNegativeRoundoff) ++s.negative_nodes;
  s.rho = first[0];
  if (!(s.rho > 0.0))
    throw Error(ErrorKind::NonPositiveDensity, "cell density " + std::to_string(s.rho) + " is not positive");
  s.U = {first[1] / s.rho, first[2] / s.rho, first[3] / s.rho};

  // Second pass about the bulk velocity.
  const auto second = accumulate_blocked<6>(F.size(), [&](std::size_t k, std::array<double, 6>& p) {
    const double wf = grid.weight(k) * F[k];
    const Vec3& v = grid.node(k);
    const double c0 = v[0] - s.U[0], c1 = v[1] - s.U[1], c2 = v[2] - s.U[2];
    p[0] += wf * c0 * c0;
    p[1] += wf * c1 * c1;
    p[2] += wf * c2 * c2;
    p[3] += wf * c0 * c1;
    p[4] += wf * c1 * c2;
    p[5] += wf * c2 * c0;
  });
  const double inv = 1.0 / s.rho;
  s.Theta = {second[0] * inv, second[1] * inv, second[2] * inv,
             second[3] * inv, second[4] * inv, second[5] * inv};
  s.T = s.Theta.trace() / 3.0;
  s.Tnu = temperature_tensor(s.T, s.Theta, nu);
  s.Gnu = g_nu(s.rho, s.U, s.T, s.Theta, nu);
  return s;
}

MomentState with_nu(const MomentState& state, double nu) {
  require_nu_in_range(nu);
  MomentState s = state;
  s.nu = nu;
  s.Tnu = temperature_tensor(s.T, s.Theta, nu);
  s.Gnu = g_nu(s.rho, s.U, s.T, s.Theta, nu);
  return s;
}

SpdReport check_spd_and_det(const Mat3& m, double spd_tol) {
  return check_spd_and_det(Sym3::from_matrix(m), spd_tol);
}

SpdReport check_spd_and_det(const Sym3& s, double spd_tol) {
  SpdReport r;
  const Cholesky3 c = Cholesky3::factor(s, spd_tol);
  r.is_spd = c.ok;
  r.pivots = c.pivots;
  r.min_eigenvalue = eigenvalues(s)[0];
  r.det_closed_form = det_cofactor(s);
  r.det_no_triple_product = det_without_triple_product(s);
  r.det_factorized = det_lu(s.to_matrix());
  return r;
}

EquivalenceConstants equivalence_constants(double nu) {
  const double a = 1.0 - nu, b = 1.0 + 2.0 * nu;
  return {std::min(a, b), std::max(a, b)};
}

EquivalenceReport equivalence_bounds(const MomentState& state, int trials, std::uint64_t seed) {
  EquivalenceReport r;
  r.constants = equivalence_constants(state.nu);
  r.T = state.T;
  r.trials = trials;
  r.min_quotient = std::numeric_limits<double>::infinity();
  r.max_quotient = -std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  constexpr double slack = 1e-10;
  for (int t = 0; t < trials; ++t) {
    Vec3 k{};
    double n2 = 0;
    do {
      k = {normal(rng), normal(rng), normal(rng)};
      n2 = norm2(k);
    } while (n2 < 1e-20);
    const double n = std::sqrt(n2);
    for (double& x : k) x /= n;

    const double q = state.Tnu.quadratic(k);
    r.min_quotient = std::min(r.min_quotient, q);
    r.max_quotient = std::max(r.max_quotient, q);
    if (q < r.constants.lower * state.T - slack || q > r.constants.upper * state.T + slack) {
      std::ostringstream os;
      os.precision(17);
      os << "k = (" << k[0] << ", " << k[1] << ", " << k[2] << ") gives k^T Tnu k = " << q
         << " outside [" << r.constants.lower * state.T << ", " << r.constants.upper * state.T << "]";
      throw Error(ErrorKind::BoundViolation, os.str());
    }
  }
  return r;
}

std::string moment_csv_header() {
  return "rho,U1,U2,U3,T,Theta11,Theta22,Theta33,Theta12,Theta23,Theta31,"
         "Tnu11,Tnu22,Tnu33,Tnu12,Tnu23,Tnu31";
}

std::string moment_csv_row(const MomentState& s) {
  std::ostringstream os;
  os.precision(17);
  os << s.rho << ',' << s.U[0] << ',' << s.U[1] << ',' << s.U[2] << ',' << s.T;
  for (double x : s.Theta.as_array()) os << ',' << x;
  for (double x : s.Tnu.as_array()) os << ',' << x;
  return os.str();
}

}  // namespace esbgk
