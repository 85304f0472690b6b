#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "esbgk/collision_basis.hpp"
#include "esbgk/phase_space.hpp"

namespace esbgk {

// Perturbation variables: F = mu + sqrt(mu) f.

Field to_perturbation(std::span<const double> F, const CollisionBasis& basis);
Field from_perturbation(std::span<const double> f, const CollisionBasis& basis);

// Orthogonal projections onto the collision invariants (P0), the trace-free
// diagonal family (P1) and the off-diagonal products (P2).
Field project_P0(std::span<const double> f, const CollisionBasis& basis);
Field project_P1(std::span<const double> f, const CollisionBasis& basis);
Field project_P2(std::span<const double> f, const CollisionBasis& basis);

/// P0 f + nu (P1 f + P2 f)
Field project_Pnu(std::span<const double> f, double nu, const CollisionBasis& basis);

/// Linearized relaxation operator (P_nu f - f) / (1 - nu).
Field apply_Lnu(std::span<const double> f, double nu, const CollisionBasis& basis);

/// min{1, (1 - |nu|) / (1 - nu)}
double coercivity_constant(double nu);

struct CoercivityGap {
  double lhs = 0;  // <L_nu f, f>
  double rhs = 0;  // -constant * ||(I - P0) f||^2
  double constant = 0;
  double slack() const { return rhs - lhs; }
};
CoercivityGap coercivity_gap(std::span<const double> f, double nu, const CollisionBasis& basis);

/// a = <f, sqrt(mu)>, b_i = <f, v_i sqrt(mu)>, c = <f, |v|^2 sqrt(mu)>.
struct MacroCoefficients {
  double a = 0;
  Vec3 b{};
  double c = 0;
};
MacroCoefficients macro_coefficients(std::span<const double> f, const CollisionBasis& basis);

/// The element of span{sqrt(mu), v sqrt(mu), |v|^2 sqrt(mu)} whose quadratures
/// (a, b, c) match those of f, found by a 5x5 Gram solve. Its expansion
/// coefficients in the unnormalized invariants are also returned through
/// `span_coefficients` when non-null.
Field macro_projection(std::span<const double> f, const CollisionBasis& basis,
                       std::array<double, 5>* span_coefficients = nullptr);

/// Per spatial cell, the 13 orthonormal-basis coefficients of
///   (d_t + v.grad_x) P f - [ -(d_t + v.grad_x)(I - P) f + L_nu (I - P) f + Gamma(f) ]
/// where Gamma(f) is whatever remains of the full relaxation term A_nu (M_nu(F) - F)/sqrt(mu)
/// after subtracting L_nu f. Spatial derivatives are periodic central differences.
/// `f_t` and `f` are x-major arrays of n_x * n_v values.
std::vector<std::array<double, CollisionBasis::kSize>> micro_macro_residual(
    std::span<const double> f_t, std::span<const double> f, const CollisionBasis& basis,
    const SpatialGrid& x_grid, double nu, bool conservative = true);

// ---------------------------------------------------------------------------
// Finite-difference checks at the global equilibrium.

/// (rho, U, Tnu) -> (rho, rho U, G_nu). Primitive order: rho, U1..3, T11, T22, T33, T12, T23, T31.
std::array<double, 10> macroscopic_map(const std::array<double, 10>& primitives, double nu);

struct JacobianCheck {
  std::array<std::array<double, 10>, 10> jacobian{};
  double max_deviation = 0;  // against diag(1,1,1,1,1/2,...,1/2)
};
JacobianCheck verify_jacobian_at_equilibrium(double nu, double h);

inline const std::array<const char*, 10> kGaussianParameterNames{
    "rho", "U1", "U2", "U3", "T11", "T22", "T33", "T12", "T23", "T31"};

/// Central difference of the sampled Gaussian w.r.t. parameter `index` (order as
/// kGaussianParameterNames) at (rho, U, Tnu) = (1, 0, Id).
Field gaussian_derivative_fd(const VelocityGrid& grid, int index, double h);
/// Closed-form derivative at equilibrium: mu, v_i mu, (v_i^2 - 1)/2 mu, v_i v_j mu.
Field gaussian_derivative_exact(const VelocityGrid& grid, int index);

struct GaussianDerivativeCheck {
  std::array<double, 10> max_error{};
  double worst = 0;
};
GaussianDerivativeCheck verify_gaussian_derivatives_at_mu(const VelocityGrid& grid, double h);

struct FirstVariationRow {
  double eps = 0;
  double remainder = 0;  // || (M_nu(mu + eps sqrt(mu) f) - mu)/sqrt(mu) - eps P_nu f ||
  double ratio = 0;      // remainder / previous remainder (0 for the first row)
};
std::vector<FirstVariationRow> verify_first_variation(std::span<const double> f, double nu,
                                                      std::span<const double> eps_list,
                                                      const CollisionBasis& basis);

}  // namespace esbgk
