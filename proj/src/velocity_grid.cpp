#include "esbgk/velocity_grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace esbgk {

VelocityGrid VelocityGrid::build(double v_max, int n_per_axis) {
  if (!(v_max > 0.0) || !std::isfinite(v_max))
    throw Error(ErrorKind::InvalidParameter, "v_max must be positive, got " + std::to_string(v_max));
  if (n_per_axis < 4 || n_per_axis % 2 != 0)
    throw Error(ErrorKind::InvalidParameter,
                "n_per_axis must be even and >= 4, got " + std::to_string(n_per_axis));

  VelocityGrid g;
  g.v_max_ = v_max;
  g.n_ = n_per_axis;
  g.h_ = 2.0 * v_max / n_per_axis;

  std::vector<double> axis(n_per_axis);
  for (int i = 0; i < n_per_axis; ++i) axis[i] = -v_max + (i + 0.5) * g.h_;
  // Pin exact antisymmetry of the axis so mirrored nodes are exact negatives.
  for (int i = 0; i < n_per_axis / 2; ++i) axis[n_per_axis - 1 - i] = -axis[i];

  const std::size_t n3 = static_cast<std::size_t>(n_per_axis) * n_per_axis * n_per_axis;
  g.nodes_.reserve(n3);
  for (int i = 0; i < n_per_axis; ++i)
    for (int j = 0; j < n_per_axis; ++j)
      for (int l = 0; l < n_per_axis; ++l) g.nodes_.push_back({axis[i], axis[j], axis[l]});
  g.weights_.assign(n3, g.h_ * g.h_ * g.h_);
  return g;
}

std::size_t VelocityGrid::mirror(std::size_t k) const {
  const std::size_t n = n_;
  const std::size_t l = k % n, j = (k / n) % n, i = k / (n * n);
  return index(n_ - 1 - static_cast<int>(i), n_ - 1 - static_cast<int>(j), n_ - 1 - static_cast<int>(l));
}

std::size_t VelocityGrid::swap_axes(std::size_t k, int a, int b) const {
  const std::size_t n = n_;
  std::array<int, 3> ijk{static_cast<int>(k / (n * n)), static_cast<int>((k / n) % n), static_cast<int>(k % n)};
  std::swap(ijk[a], ijk[b]);
  return index(ijk[0], ijk[1], ijk[2]);
}

double integrate(const VelocityGrid& grid, std::span<const double> values) {
  return integrate_moment(grid, values, [](const Vec3&) { return 1.0; });
}

double inner_product(const VelocityGrid& grid, std::span<const double> a, std::span<const double> b) {
  if (a.size() != grid.size() || b.size() != grid.size())
    throw Error(ErrorKind::LengthMismatch, "inner product operands do not match the grid");
  return accumulate_blocked<1>(a.size(), [&](std::size_t k, std::array<double, 1>& p) {
    p[0] += grid.weight(k) * a[k] * b[k];
  })[0];
}

double l2_norm(const VelocityGrid& grid, std::span<const double> a) {
  return std::sqrt(std::max(0.0, inner_product(grid, a, a)));
}

double global_maxwellian(const Vec3& v) {
  static const double norm = std::pow(2.0 * std::numbers::pi, -1.5);
  return norm * std::exp(-0.5 * norm2(v));
}

std::vector<double> sample_global_maxwellian(const VelocityGrid& grid) {
  return sample_on_grid(grid, global_maxwellian);
}

}  // namespace esbgk
