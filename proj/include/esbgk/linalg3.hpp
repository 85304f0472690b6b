#pragma once

#include <array>
#include <cmath>

namespace esbgk {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm2(const Vec3& a) { return dot(a, a); }

/// Symmetric 3x3 matrix stored by its six independent entries.
/// Off-diagonal order follows the (12, 23, 31) convention used throughout.
struct Sym3 {
  double xx = 0, yy = 0, zz = 0, xy = 0, yz = 0, zx = 0;

  static Sym3 identity() { return {1, 1, 1, 0, 0, 0}; }
  static Sym3 diagonal(double a, double b, double c) { return {a, b, c, 0, 0, 0}; }
  static Sym3 outer(const Vec3& u) {
    return {u[0] * u[0], u[1] * u[1], u[2] * u[2], u[0] * u[1], u[1] * u[2], u[2] * u[0]};
  }
  /// Symmetrized (M + M^T) / 2.
  static Sym3 from_matrix(const Mat3& m);

  double operator()(int i, int j) const;
  Mat3 to_matrix() const;
  std::array<double, 6> as_array() const { return {xx, yy, zz, xy, yz, zx}; }
  static Sym3 from_array(const std::array<double, 6>& a) { return {a[0], a[1], a[2], a[3], a[4], a[5]}; }

  double trace() const { return xx + yy + zz; }
  /// k^T S k
  double quadratic(const Vec3& k) const {
    return xx * k[0] * k[0] + yy * k[1] * k[1] + zz * k[2] * k[2] +
           2.0 * (xy * k[0] * k[1] + yz * k[1] * k[2] + zx * k[2] * k[0]);
  }

  Sym3& operator+=(const Sym3& o);
  Sym3& operator*=(double s);
  friend Sym3 operator+(Sym3 a, const Sym3& b) { return a += b; }
  friend Sym3 operator-(Sym3 a, const Sym3& b) { return a += (b * -1.0); }
  friend Sym3 operator*(Sym3 a, double s) { return a *= s; }
  friend Sym3 operator*(double s, Sym3 a) { return a *= s; }
};

/// Full symmetric cofactor expansion, including the 2*T12*T23*T31 term.
double det_cofactor(const Sym3& s);

/// T11 T22 T33 - T23^2 T11 - T31^2 T22 - T12^2 T33. Omits the triple off-diagonal
/// product, so it equals det_cofactor only when some off-diagonal entry vanishes.
double det_without_triple_product(const Sym3& s);

/// Determinant from LU with partial pivoting.
double det_lu(const Mat3& m);

/// Eigenvalues of a symmetric 3x3 matrix in ascending order (trigonometric closed form).
std::array<double, 3> eigenvalues(const Sym3& s);

/// Lower-triangular Cholesky factor. Valid only when `ok` is set.
struct Cholesky3 {
  bool ok = false;
  // l[i][j] for j <= i
  Mat3 l{};
  std::array<double, 3> pivots{};  // LDL^T pivots d_i = l_ii^2

  static Cholesky3 factor(const Sym3& s, double pivot_tol = 0.0);

  /// Solves L y = b.
  Vec3 forward(const Vec3& b) const;
  /// Solves S x = b.
  Vec3 solve(const Vec3& b) const;
  Sym3 inverse() const;
  double log_det() const;
};

}  // namespace esbgk
