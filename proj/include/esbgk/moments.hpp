#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "esbgk/linalg3.hpp"
#include "esbgk/velocity_grid.hpp"

namespace esbgk {

/// Values below this are treated as a genuine sign violation, not roundoff.
inline constexpr double kNegativeRoundoff = -1e-13;

/// Macroscopic fields of one spatial cell.
struct MomentState {
  double rho = 0;
  Vec3 U{};
  double T = 0;
  Sym3 Theta;
  Sym3 Tnu;
  std::array<double, 6> Gnu{};  // G11, G22, G33, G12, G23, G31
  double nu = 0;
  /// Number of nodes with F < kNegativeRoundoff.
  std::size_t negative_nodes = 0;
};

/// (1 - nu) T Id + nu Theta
Sym3 temperature_tensor(double T, const Sym3& Theta, double nu);

/// (1-nu)/3 (3 rho T + rho |U|^2)/2 Id + nu (rho Theta + rho U U^T)/2 - rho/2 Id
std::array<double, 6> g_nu(double rho, const Vec3& U, double T, const Sym3& Theta, double nu);

/// The same G expressed through (rho, U, Tnu) only:
/// rho Tnu/2 + (1-nu) rho |U|^2/6 Id + nu rho U U^T/2 - rho/2 Id.
std::array<double, 6> g_nu_from_primitives(double rho, const Vec3& U, const Sym3& Tnu, double nu);

MomentState compute_moments(std::span<const double> F, const VelocityGrid& grid, double nu);

/// Re-derives Tnu and Gnu for a different nu from the nu-independent fields.
MomentState with_nu(const MomentState& state, double nu);

/// Collision frequency rho T / (1 - nu).
inline double collision_frequency(const MomentState& s) { return s.rho * s.T / (1.0 - s.nu); }

/// Prandtl number 1 / (1 - nu) of the relaxation model.
inline double prandtl_number(double nu) { return 1.0 / (1.0 - nu); }

struct SpdReport {
  bool is_spd = false;
  double min_eigenvalue = 0;
  double det_closed_form = 0;  // full symmetric cofactor expansion
  double det_factorized = 0;   // LU with partial pivoting
  double det_no_triple_product = 0;   // expansion without the 2 T12 T23 T31 term
  std::array<double, 3> pivots{};
};

inline constexpr double kSpdTolerance = 1e-12;

SpdReport check_spd_and_det(const Mat3& m, double spd_tol = kSpdTolerance);
SpdReport check_spd_and_det(const Sym3& s, double spd_tol = kSpdTolerance);

/// C_lower = min{1-nu, 1+2nu}, C_upper = max{1-nu, 1+2nu}.
struct EquivalenceConstants {
  double lower = 0;
  double upper = 0;
};
EquivalenceConstants equivalence_constants(double nu);

struct EquivalenceReport {
  EquivalenceConstants constants;
  double T = 0;
  double min_quotient = 0;  // min over sampled unit k of k^T Tnu k
  double max_quotient = 0;
  int trials = 0;
};

/// Samples `trials` seeded random unit vectors and checks
/// C_lower T - 1e-10 <= k^T Tnu k <= C_upper T + 1e-10. Throws BoundViolation
/// naming the first offending direction.
EquivalenceReport equivalence_bounds(const MomentState& state, int trials, std::uint64_t seed);

std::string moment_csv_header();
std::string moment_csv_row(const MomentState& s);

}  // namespace esbgk
