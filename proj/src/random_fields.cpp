#include "esbgk/random_fields.hpp"

#include <cmath>
#include <numbers>

#include "esbgk/anisotropic_gaussian.hpp"

namespace esbgk {

namespace {

Mat3 random_rotation(Rng& rng) {
  // Gram-Schmidt on three normal vectors.
  std::normal_distribution<double> normal;
  Mat3 q{};
  for (int r = 0; r < 3; ++r) {
    Vec3 x{normal(rng), normal(rng), normal(rng)};
    for (int p = 0; p < r; ++p) {
      const double c = dot(x, q[p]);
      for (int i = 0; i < 3; ++i) x[i] -= c * q[p][i];
    }
    const double len = std::sqrt(norm2(x));
    for (int i = 0; i < 3; ++i) q[r][i] = x[i] / len;
  }
  return q;
}

Vec3 random_ball(Rng& rng, double radius) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec3 d{normal(rng), normal(rng), normal(rng)};
  const double len = std::sqrt(norm2(d));
  const double r = radius * std::cbrt(unit(rng));
  return {r * d[0] / len, r * d[1] / len, r * d[2] / len};
}

}  // namespace

Sym3 random_spd(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> eig(lo, hi);
  const Mat3 q = random_rotation(rng);
  const double lam[3] = {eig(rng), eig(rng), eig(rng)};
  Mat3 m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int r = 0; r < 3; ++r) m[i][j] += q[r][i] * lam[r] * q[r][j];
  return Sym3::from_matrix(m);
}

Field random_perturbation(const CollisionBasis& basis, Rng& rng) {
  const VelocityGrid& grid = basis.grid();
  std::normal_distribution<double> normal;
  Field f(grid.size(), 0.0);
  for (const Field& e : basis.ortho()) {
    const double c = normal(rng);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] += c * e[k];
  }

  std::array<double, 35> coef;
  for (double& c : coef) c = normal(rng) / 8.0;
  const Field& sq = basis.sqrt_mu();
  for (std::size_t k = 0; k < f.size(); ++k) {
    const Vec3& v = grid.node(k);
    double pw[3][5];
    for (int d = 0; d < 3; ++d) {
      pw[d][0] = 1.0;
      for (int e = 1; e <= 4; ++e) pw[d][e] = pw[d][e - 1] * v[d];
    }
    double p = 0;
    int idx = 0;
    for (int a = 0; a <= 4; ++a)
      for (int b = 0; a + b <= 4; ++b)
        for (int c = 0; a + b + c <= 4; ++c) p += coef[idx++] * pw[0][a] * pw[1][b] * pw[2][c];
    f[k] += p * sq[k];
  }

  const double len = l2_norm(grid, f);
  for (double& x : f) x /= len;
  return f;
}

Field random_nonnegative_distribution(const VelocityGrid& grid, Rng& rng) {
  std::uniform_int_distribution<int> count(1, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Field F(grid.size(), 0.0);
  const int components = count(rng);
  for (int c = 0; c < components; ++c) {
    const double rho = 0.2 + 1.8 * unit(rng);
    const Vec3 U = random_ball(rng, 1.5);
    const Sym3 T = random_spd(rng, 0.3, 2.0);
    const Field g = sample_gaussian(GaussianSpec::make(rho, U, T), grid);
    for (std::size_t k = 0; k < F.size(); ++k) F[k] += g[k];
  }
  if (unit(rng) < 0.5) {
    std::uniform_int_distribution<std::size_t> node(0, grid.size() - 1);
    const int spikes = 1 + static_cast<int>(8 * unit(rng));
    for (int s = 0; s < spikes; ++s) F[node(rng)] += 0.05 * unit(rng);
  }
  return F;
}

GaussianDraw random_gaussian_parameters(Rng& rng, double u_max, double lo, double hi) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  GaussianDraw d;
  d.rho = 0.5 + 1.5 * unit(rng);
  d.U = random_ball(rng, u_max);
  d.Tnu = random_spd(rng, lo, hi);
  return d;
}

}  // namespace esbgk
