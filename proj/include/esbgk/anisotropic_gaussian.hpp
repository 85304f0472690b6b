#pragma once

#include <array>
#include <span>

#include "esbgk/collision_basis.hpp"
#include "esbgk/moments.hpp"

namespace esbgk {

/// rho / sqrt(det(2 pi Tnu)) exp(-1/2 (v-U)^T Tnu^{-1} (v-U)), evaluated via the
/// Cholesky factor of Tnu.
class GaussianSpec {
 public:
  /// Throws NotSpd when Tnu fails the pivot test.
  static GaussianSpec make(double rho, const Vec3& U, const Sym3& Tnu);
  static GaussianSpec from_state(const MomentState& s) { return make(s.rho, s.U, s.Tnu); }

  double rho() const { return rho_; }
  const Vec3& U() const { return U_; }
  const Sym3& Tnu() const { return Tnu_; }
  const Sym3& inverse() const { return inverse_; }
  /// -1/2 log det(2 pi Tnu)
  double log_norm() const { return log_norm_; }

  double operator()(const Vec3& v) const {
    const Vec3 y = chol_.forward({v[0] - U_[0], v[1] - U_[1], v[2] - U_[2]});
    return rho_ * std::exp(log_norm_ - 0.5 * norm2(y));
  }

 private:
  double rho_ = 0;
  Vec3 U_{};
  Sym3 Tnu_, inverse_;
  double log_norm_ = 0;
  Cholesky3 chol_;
};

Field sample_gaussian(const GaussianSpec& spec, const VelocityGrid& grid);

/// out_k = scale_k exp(c + b.v_k + v_k^T A v_k), built from per-axis and
/// per-plane tables. An empty `scale` means 1.
void exp_quadratic(const VelocityGrid& grid, double c, const Vec3& b, const Sym3& A, std::span<const double> scale,
                   std::span<double> out);

/// M_nu(F) sampled on the grid from the macroscopic state of F.
Field build_gaussian(const MomentState& state, const VelocityGrid& grid);

/// Moment functions 1, v1, v2, v3, v1^2, v2^2, v3^2, v1 v2, v2 v3, v3 v1.
using MomentVector = std::array<double, 10>;

MomentVector moment_functions(const Vec3& v);
/// Sum_k w_k F_k phi(v_k), compensated.
/// Discrete moments sum_k w_k F_k v1^a v2^b v3^c for a + b + c <= max_degree (<= 4).
struct MonomialMoments {
  static constexpr int kMaxDegree = 4;
  static constexpr int kSide = kMaxDegree + 1;
  static constexpr std::size_t index(int a, int b, int c) { return (a * kSide + b) * kSide + c; }
  std::array<double, kSide * kSide * kSide> values{};
  double operator()(int a, int b, int c) const { return values[index(a, b, c)]; }
};
MonomialMoments monomial_moments(std::span<const double> F, const VelocityGrid& grid, int max_degree);

MomentVector discrete_moments(std::span<const double> F, const VelocityGrid& grid);
/// (rho, rho U, rho Tnu + rho U U^T): moments the Gaussian must carry.
MomentVector gaussian_moment_targets(const MomentState& state);
/// Largest component of |a - b| scaled by rho, rho sqrt(theta), rho theta per block,
/// with theta = T + |U|^2 / 3.
double scaled_moment_residual(const MomentVector& a, const MomentVector& b, const MomentState& state);

struct CorrectionOptions {
  double tol = 1e-12;
  int max_newton = 25;
  /// When Newton stagnates at roundoff above `tol`, a residual at or below this
  /// level is still accepted.
  double stagnation_accept = 1e-12;
};

/// Newton runs to roundoff; used by the time integrator.
inline constexpr CorrectionOptions kTightCorrection{1e-14, 25, 1e-12};

struct CorrectionResult {
  Field values;
  double alpha = 0;
  Vec3 beta{};
  Sym3 gamma;  // exponent tilt v^T Gamma v
  int iterations = 0;
  double initial_residual = 0;
  double residual = 0;
};

/// Multiplies the raw Gaussian by exp(alpha + beta.v + v^T Gamma v), solving for
/// the 10 parameters with damped Newton so that the discrete moments of the
/// result match gaussian_moment_targets(target). Returns the input unchanged when
/// it already satisfies the tolerance.
CorrectionResult conservative_correction(std::span<const double> raw_gaussian, const MomentState& target,
                                         const VelocityGrid& grid, const CorrectionOptions& opts = {});

}  // namespace esbgk
