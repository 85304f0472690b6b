#pragma once

#include <array>
#include <span>
#include <vector>

#include "esbgk/velocity_grid.hpp"

namespace esbgk {

using Field = std::vector<double>;

/// The 13 node-sampled moment functions
///   sqrt(mu), v_i sqrt(mu), v_i v_j sqrt(mu) (i<j), v_i^2 sqrt(mu), v_i |v|^2 sqrt(mu)
/// together with an orthonormal basis of their span under the discrete
/// quadrature inner product.
///
/// The orthonormal functions are generated block by block so that the leading
/// blocks realize the projections of the linearized operator exactly:
///   [0, 5)   sqrt(mu), v sqrt(mu), |v|^2 sqrt(mu)           (collision invariants)
///   [5, 7)   trace-free diagonal family c_1, c_2            (c_3 = -c_1 - c_2)
///   [7, 10)  v_1 v_2, v_2 v_3, v_3 v_1 times sqrt(mu)
///   [10, 13) v_i |v|^2 sqrt(mu)
/// The basis keeps a reference to the grid; the grid must outlive it.
class CollisionBasis {
 public:
  static constexpr int kSize = 13;
  static constexpr std::array<int, 5> kInvariantSpan{0, 1, 2, 3, 4};
  static constexpr std::array<int, 2> kTraceFreeSpan{5, 6};
  static constexpr std::array<int, 3> kOffDiagonalSpan{7, 8, 9};

  static CollisionBasis build(const VelocityGrid& grid);

  const VelocityGrid& grid() const { return *grid_; }
  const Field& mu() const { return mu_; }
  const Field& sqrt_mu() const { return sqrt_mu_; }

  /// Raw functions in the order sqrt(mu), v_1..3, v1v2, v2v3, v3v1, v_1^2..v_3^2, v_1..3 |v|^2 (times sqrt(mu)).
  const std::vector<Field>& raw() const { return raw_; }
  const std::vector<Field>& ortho() const { return ortho_; }

  /// (3 v_i^2 - |v|^2) / (3 sqrt 2) * sqrt(mu), i in {0,1,2}.
  Field trace_free(int i) const;
  /// The five unnormalized collision invariants sqrt(mu), v_i sqrt(mu), |v|^2 sqrt(mu).
  std::array<Field, 5> invariants() const;

  /// Sum over `span` of <f, e_k> e_k.
  Field project(std::span<const double> f, std::span<const int> span) const;
  /// Coefficients <f, e_k> for all 13 orthonormal functions.
  std::array<double, kSize> coefficients(std::span<const double> f) const;

  /// Gram matrix of the orthonormal functions (row-major 13x13).
  std::array<std::array<double, kSize>, kSize> ortho_gram() const;

 private:
  const VelocityGrid* grid_ = nullptr;
  Field mu_, sqrt_mu_;
  std::vector<Field> raw_;
  std::vector<Field> ortho_;
};

}  // namespace esbgk
