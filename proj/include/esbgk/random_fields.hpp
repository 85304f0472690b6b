#pragma once

#include <random>

#include "esbgk/collision_basis.hpp"

namespace esbgk {

using Rng = std::mt19937_64;

/// Random perturbation f: normal combination of the 13 orthonormal functions
/// plus sqrt(mu) times a random polynomial of degree <= 4. Unit discrete L2 norm.
Field random_perturbation(const CollisionBasis& basis, Rng& rng);

/// Random SPD matrix with eigenvalues drawn uniformly from [lo, hi].
Sym3 random_spd(Rng& rng, double lo, double hi);

/// Non-negative distribution: a mixture of one to three anisotropic Gaussians,
/// with sparse positive spikes added on every other draw.
Field random_nonnegative_distribution(const VelocityGrid& grid, Rng& rng);

/// Gaussian parameters with |U| <= u_max and Tnu eigenvalues in [lo, hi].
struct GaussianDraw {
  double rho = 1;
  Vec3 U{};
  Sym3 Tnu = Sym3::identity();
};
GaussianDraw random_gaussian_parameters(Rng& rng, double u_max = 0.5, double lo = 0.5, double hi = 2.0);

}  // namespace esbgk
