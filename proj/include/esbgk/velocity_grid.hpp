#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "esbgk/errors.hpp"
#include "esbgk/linalg3.hpp"

namespace esbgk {

/// Neumaier-compensated accumulator. Summation order is the caller's loop order,
/// so results are reproducible for a fixed node ordering.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Deterministic blocked summation of M quantities over n items: plain sums
/// within blocks of 128 items, Neumaier-compensated sums across blocks.
/// `add(k, partial)` adds item k's contributions into `partial`.
template <int M, class AddFn>
std::array<double, M> accumulate_blocked(std::size_t n, AddFn&& add) {
  constexpr std::size_t kBlock = 128;
  std::array<CompensatedSum, M> total;
  std::array<double, M> partial;
  for (std::size_t start = 0; start < n; start += kBlock) {
    partial.fill(0.0);
    const std::size_t stop = std::min(n, start + kBlock);
    for (std::size_t k = start; k < stop; ++k) add(k, partial);
    for (int m = 0; m < M; ++m) total[m].add(partial[m]);
  }
  std::array<double, M> out;
  for (int m = 0; m < M; ++m) out[m] = total[m].value();
  return out;
}

/// Uniform midpoint grid on the cube [-v_max, v_max]^3.
///
/// Node k = (i * n + j) * n + l sits at (c_i, c_j, c_l) with
/// c_i = -v_max + (i + 1/2) h and h = 2 v_max / n. With n even the grid is
/// symmetric under v -> -v and contains no node at the origin.
class VelocityGrid {
 public:
  static VelocityGrid build(double v_max, int n_per_axis);

  double v_max() const { return v_max_; }
  int n_per_axis() const { return n_; }
  double spacing() const { return h_; }
  std::size_t size() const { return nodes_.size(); }

  const std::vector<Vec3>& nodes() const { return nodes_; }
  const Vec3& node(std::size_t k) const { return nodes_[k]; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(std::size_t k) const { return weights_[k]; }

  std::size_t index(int i, int j, int l) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + l;
  }
  /// Index of the node at -v.
  std::size_t mirror(std::size_t k) const;
  /// Index of the node obtained by swapping velocity axes a and b.
  std::size_t swap_axes(std::size_t k, int a, int b) const;

  /// Largest |v_1| over the nodes.
  double max_abs_node_speed() const { return v_max_ - 0.5 * h_; }

 private:
  double v_max_ = 0;
  int n_ = 0;
  double h_ = 0;
  std::vector<Vec3> nodes_;
  std::vector<double> weights_;
};

/// Sum_k w_k * values[k] * weight_fn(node_k), blocked-compensated, in node order.
template <class WeightFn>
double integrate_moment(const VelocityGrid& grid, std::span<const double> values, WeightFn&& weight_fn) {
  if (values.size() != grid.size())
    throw Error(ErrorKind::LengthMismatch, "field has " + std::to_string(values.size()) +
                                               " values, grid has " + std::to_string(grid.size()));
  return accumulate_blocked<1>(values.size(), [&](std::size_t k, std::array<double, 1>& p) {
    p[0] += grid.weight(k) * values[k] * weight_fn(grid.node(k));
  })[0];
}

double integrate(const VelocityGrid& grid, std::span<const double> values);

/// Discrete L^2_v inner product sum_k w_k a_k b_k.
double inner_product(const VelocityGrid& grid, std::span<const double> a, std::span<const double> b);
double l2_norm(const VelocityGrid& grid, std::span<const double> a);

template <class Fn>
std::vector<double> sample_on_grid(const VelocityGrid& grid, Fn&& fn) {
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) out[k] = fn(grid.node(k));
  return out;
}

/// mu(v) = (2 pi)^{-3/2} exp(-|v|^2 / 2)
double global_maxwellian(const Vec3& v);
std::vector<double> sample_global_maxwellian(const VelocityGrid& grid);

}  // namespace esbgk
