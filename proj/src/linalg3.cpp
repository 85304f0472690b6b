#include "esbgk/linalg3.hpp"

#include <algorithm>
#include <numbers>
#include <utility>

#include "esbgk/errors.hpp"

namespace esbgk {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::LengthMismatch: return "length-mismatch";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::NonPositiveDensity: return "non-positive-density";
    case ErrorKind::NuOutOfRange: return "nu-out-of-range";
    case ErrorKind::NotSpd: return "not-spd";
    case ErrorKind::NoConvergence: return "no-convergence";
    case ErrorKind::DegenerateBasis: return "degenerate-basis";
    case ErrorKind::SingularGram: return "singular-gram";
    case ErrorKind::CflViolation: return "cfl-violation";
    case ErrorKind::BoundViolation: return "bound-violation";
    case ErrorKind::InsufficientSamples: return "insufficient-samples";
    case ErrorKind::ConfigInvalid: return "config-invalid";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

void require_nu_in_range(double nu) {
  if (!(nu > -0.5 && nu < 1.0)) {
    throw Error(ErrorKind::NuOutOfRange,
                "nu = " + std::to_string(nu) + " must lie in the open interval (-1/2, 1)");
  }
}

Sym3 Sym3::from_matrix(const Mat3& m) {
  return {m[0][0], m[1][1], m[2][2], 0.5 * (m[0][1] + m[1][0]), 0.5 * (m[1][2] + m[2][1]),
          0.5 * (m[2][0] + m[0][2])};
}

double Sym3::operator()(int i, int j) const {
  if (i == j) return i == 0 ? xx : (i == 1 ? yy : zz);
  if (i > j) std::swap(i, j);
  if (i == 0 && j == 1) return xy;
  if (i == 1 && j == 2) return yz;
  return zx;
}

Mat3 Sym3::to_matrix() const {
  return {{{xx, xy, zx}, {xy, yy, yz}, {zx, yz, zz}}};
}

Sym3& Sym3::operator+=(const Sym3& o) {
  xx += o.xx; yy += o.yy; zz += o.zz;
  xy += o.xy; yz += o.yz; zx += o.zx;
  return *this;
}

Sym3& Sym3::operator*=(double s) {
  xx *= s; yy *= s; zz *= s;
  xy *= s; yz *= s; zx *= s;
  return *this;
}

double det_cofactor(const Sym3& s) {
  return s.xx * s.yy * s.zz + 2.0 * s.xy * s.yz * s.zx - s.yz * s.yz * s.xx - s.zx * s.zx * s.yy -
         s.xy * s.xy * s.zz;
}

double det_without_triple_product(const Sym3& s) {
  return s.xx * s.yy * s.zz - s.yz * s.yz * s.xx - s.zx * s.zx * s.yy - s.xy * s.xy * s.zz;
}

double det_lu(const Mat3& m) {
  Mat3 a = m;
  double det = 1.0;
  for (int k = 0; k < 3; ++k) {
    int p = k;
    for (int i = k + 1; i < 3; ++i)
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    if (a[p][k] == 0.0) return 0.0;
    if (p != k) {
      std::swap(a[p], a[k]);
      det = -det;
    }
    det *= a[k][k];
    for (int i = k + 1; i < 3; ++i) {
      const double f = a[i][k] / a[k][k];
      for (int j = k; j < 3; ++j) a[i][j] -= f * a[k][j];
    }
  }
  return det;
}

std::array<double, 3> eigenvalues(const Sym3& s) {
  const double p1 = s.xy * s.xy + s.yz * s.yz + s.zx * s.zx;
  const double q = s.trace() / 3.0;
  if (p1 == 0.0) {
    std::array<double, 3> e{s.xx, s.yy, s.zz};
    std::sort(e.begin(), e.end());
    return e;
  }
  const double p2 = (s.xx - q) * (s.xx - q) + (s.yy - q) * (s.yy - q) + (s.zz - q) * (s.zz - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  const Sym3 b = (s - Sym3::identity() * q) * (1.0 / p);
  const double r = std::clamp(det_cofactor(b) / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e_max = q + 2.0 * p * std::cos(phi);
  const double e_min = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double e_mid = 3.0 * q - e_max - e_min;
  return {e_min, e_mid, e_max};
}

Cholesky3 Cholesky3::factor(const Sym3& s, double pivot_tol) {
  Cholesky3 c;
  const Mat3 a = s.to_matrix();
  for (int j = 0; j < 3; ++j) {
    double d = a[j][j];
    for (int k = 0; k < j; ++k) d -= c.l[j][k] * c.l[j][k];
    c.pivots[j] = d;
    if (!(d > pivot_tol)) return c;
    c.l[j][j] = std::sqrt(d);
    for (int i = j + 1; i < 3; ++i) {
      double v = a[i][j];
      for (int k = 0; k < j; ++k) v -= c.l[i][k] * c.l[j][k];
      c.l[i][j] = v / c.l[j][j];
    }
  }
  c.ok = true;
  return c;
}

Vec3 Cholesky3::forward(const Vec3& b) const {
  Vec3 y{};
  for (int i = 0; i < 3; ++i) {
    double v = b[i];
    for (int k = 0; k < i; ++k) v -= l[i][k] * y[k];
    y[i] = v / l[i][i];
  }
  return y;
}

Vec3 Cholesky3::solve(const Vec3& b) const {
  Vec3 y = forward(b);
  Vec3 x{};
  for (int i = 2; i >= 0; --i) {
    double v = y[i];
    for (int k = i + 1; k < 3; ++k) v -= l[k][i] * x[k];
    x[i] = v / l[i][i];
  }
  return x;
}

Sym3 Cholesky3::inverse() const {
  const Vec3 c0 = solve({1, 0, 0});
  const Vec3 c1 = solve({0, 1, 0});
  const Vec3 c2 = solve({0, 0, 1});
  return {c0[0], c1[1], c2[2], 0.5 * (c0[1] + c1[0]), 0.5 * (c1[2] + c2[1]), 0.5 * (c2[0] + c0[2])};
}

double Cholesky3::log_det() const {
  return 2.0 * (std::log(l[0][0]) + std::log(l[1][1]) + std::log(l[2][2]));
}

}  // namespace esbgk
