#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "esbgk/errors.hpp"
#include "esbgk/velocity_grid.hpp"

namespace esbgk {

/// Periodic 1D spatial grid of n_x cells on a torus of circumference `length`.
struct SpatialGrid {
  int n_x = 1;
  double length = 2.0 * std::numbers::pi;

  static SpatialGrid make(int n_x, double length = 2.0 * std::numbers::pi) {
    if (n_x < 1) throw Error(ErrorKind::InvalidParameter, "n_x must be positive");
    if (!(length > 0.0)) throw Error(ErrorKind::InvalidParameter, "torus length must be positive");
    return {n_x, length};
  }

  double dx() const { return length / n_x; }
  double center(int i) const { return (i + 0.5) * dx(); }
  int wrap(int i) const { return ((i % n_x) + n_x) % n_x; }
};

/// Values of F on (spatial cell x velocity node), x-major. The velocity grid is
/// referenced, not owned.
class DistributionField {
 public:
  DistributionField() = default;
  DistributionField(SpatialGrid x, const VelocityGrid& v, double fill = 0.0)
      : x_(x), v_(&v), values_(static_cast<std::size_t>(x.n_x) * v.size(), fill) {}

  const SpatialGrid& x_grid() const { return x_; }
  const VelocityGrid& v_grid() const { return *v_; }
  int n_x() const { return x_.n_x; }
  std::size_t n_v() const { return v_->size(); }

  std::span<double> cell(int i) { return {values_.data() + static_cast<std::size_t>(i) * n_v(), n_v()}; }
  std::span<const double> cell(int i) const {
    return {values_.data() + static_cast<std::size_t>(i) * n_v(), n_v()};
  }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

 private:
  SpatialGrid x_;
  const VelocityGrid* v_ = nullptr;
  std::vector<double> values_;
};

}  // namespace esbgk
