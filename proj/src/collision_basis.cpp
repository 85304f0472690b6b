#include "esbgk/collision_basis.hpp"

#include <cmath>
#include <string>

namespace esbgk {

namespace {

// Modified Gram-Schmidt, two passes.
void orthonormalize(const VelocityGrid& grid, std::vector<Field>& fns) {
  for (std::size_t m = 0; m < fns.size(); ++m) {
    Field& f = fns[m];
    const double initial = l2_norm(grid, f);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < m; ++p) {
        const double c = inner_product(grid, f, fns[p]);
        for (std::size_t k = 0; k < f.size(); ++k) f[k] -= c * fns[p][k];
      }
    }
    const double nrm = l2_norm(grid, f);
    if (!(nrm > 1e-10 * initial) || nrm == 0.0)
      throw Error(ErrorKind::DegenerateBasis,
                  "moment function " + std::to_string(m) + " is numerically dependent on its predecessors");
    for (double& x : f) x /= nrm;
  }
}

}  // namespace

CollisionBasis CollisionBasis::build(const VelocityGrid& grid) {
  CollisionBasis b;
  b.grid_ = &grid;
  b.mu_ = sample_global_maxwellian(grid);
  b.sqrt_mu_.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) b.sqrt_mu_[k] = std::sqrt(b.mu_[k]);

  const auto weighted = [&](auto&& poly) {
    Field out(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) out[k] = poly(grid.node(k)) * b.sqrt_mu_[k];
    return out;
  };

  b.raw_.push_back(weighted([](const Vec3&) { return 1.0; }));
  for (int i = 0; i < 3; ++i) b.raw_.push_back(weighted([i](const Vec3& v) { return v[i]; }));
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    b.raw_.push_back(weighted([i, j](const Vec3& v) { return v[i] * v[j]; }));
  }
  for (int i = 0; i < 3; ++i) b.raw_.push_back(weighted([i](const Vec3& v) { return v[i] * v[i]; }));
  for (int i = 0; i < 3; ++i) b.raw_.push_back(weighted([i](const Vec3& v) { return v[i] * norm2(v); }));

  std::vector<Field> gen;
  gen.push_back(b.raw_[0]);
  for (int i = 0; i < 3; ++i) gen.push_back(b.raw_[1 + i]);
  gen.push_back(weighted([](const Vec3& v) { return norm2(v); }));
  gen.push_back(b.trace_free(0));
  gen.push_back(b.trace_free(1));
  for (int i = 0; i < 3; ++i) gen.push_back(b.raw_[4 + i]);
  for (int i = 0; i < 3; ++i) gen.push_back(b.raw_[10 + i]);
  orthonormalize(grid, gen);
  b.ortho_ = std::move(gen);
  return b;
}

Field CollisionBasis::trace_free(int i) const {
  const double s = 1.0 / (3.0 * std::sqrt(2.0));
  Field out(grid_->size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Vec3& v = grid_->node(k);
    out[k] = (3.0 * v[i] * v[i] - norm2(v)) * s * sqrt_mu_[k];
  }
  return out;
}

std::array<Field, 5> CollisionBasis::invariants() const {
  Field energy(grid_->size());
  for (std::size_t k = 0; k < energy.size(); ++k) energy[k] = norm2(grid_->node(k)) * sqrt_mu_[k];
  return {raw_[0], raw_[1], raw_[2], raw_[3], std::move(energy)};
}

Field CollisionBasis::project(std::span<const double> f, std::span<const int> span) const {
  Field out(f.size(), 0.0);
  for (int idx : span) {
    const Field& e = ortho_[idx];
    const double c = inner_product(*grid_, f, e);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += c * e[k];
  }
  return out;
}

std::array<double, CollisionBasis::kSize> CollisionBasis::coefficients(std::span<const double> f) const {
  std::array<double, kSize> c{};
  for (int m = 0; m < kSize; ++m) c[m] = inner_product(*grid_, f, ortho_[m]);
  return c;
}

std::array<std::array<double, CollisionBasis::kSize>, CollisionBasis::kSize> CollisionBasis::ortho_gram() const {
  std::array<std::array<double, kSize>, kSize> g{};
  for (int a = 0; a < kSize; ++a)
    for (int b = a; b < kSize; ++b) g[a][b] = g[b][a] = inner_product(*grid_, ortho_[a], ortho_[b]);
  return g;
}

}  // namespace esbgk
