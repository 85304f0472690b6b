#include <cmath>

#include "doctest.h"
#include "esbgk/linearized.hpp"
#include "support.hpp"

using namespace esbgk;
using test_support::default_basis;
using test_support::default_grid;

namespace {

double relative_residual(const CollisionBasis& b, const Field& f, std::span<const int> span) {
  const Field p = b.project(f, span);
  Field r(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) r[k] = f[k] - p[k];
  return l2_norm(b.grid(), r) / l2_norm(b.grid(), f);
}

}  // namespace

TEST_SUITE("collision_basis") {
  TEST_CASE("orthonormal functions have identity Gram matrix") {
    const auto G = default_basis().ortho_gram();
    for (int i = 0; i < CollisionBasis::kSize; ++i)
      for (int j = 0; j < CollisionBasis::kSize; ++j) REQUIRE(std::abs(G[i][j] - (i == j ? 1.0 : 0.0)) <= 1e-12);
  }

  TEST_CASE("raw trace-free products take the analytic values 12 and -6") {
    const VelocityGrid& g = default_grid();
    std::array<Field, 3> t;
    for (int i = 0; i < 3; ++i)
      t[i] = sample_on_grid(g, [i](const Vec3& v) { return (3 * v[i] * v[i] - norm2(v)) * std::sqrt(global_maxwellian(v)); });
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        CAPTURE(i);
        CAPTURE(j);
        CHECK(std::abs(inner_product(g, t[i], t[j]) - (i == j ? 12.0 : -6.0)) <= 1e-5);
      }
  }

  TEST_CASE("raw functions follow the documented order") {
    const CollisionBasis& b = default_basis();
    const VelocityGrid& g = default_grid();
    REQUIRE(b.raw().size() == 13u);
    const std::size_t k = g.index(20, 9, 27);
    const Vec3& v = g.node(k);
    const double s = b.sqrt_mu()[k];
    const double expect[13] = {s, v[0] * s, v[1] * s, v[2] * s, v[0] * v[1] * s, v[1] * v[2] * s, v[2] * v[0] * s,
                               v[0] * v[0] * s, v[1] * v[1] * s, v[2] * v[2] * s, v[0] * norm2(v) * s,
                               v[1] * norm2(v) * s, v[2] * norm2(v) * s};
    for (int m = 0; m < 13; ++m) CHECK(b.raw()[m][k] == doctest::Approx(expect[m]).epsilon(1e-15));
  }

  TEST_CASE("invariant block spans the collision invariants") {
    const CollisionBasis& b = default_basis();
    for (const Field& phi : b.invariants()) CHECK(relative_residual(b, phi, CollisionBasis::kInvariantSpan) <= 1e-12);
    const Field& s = b.sqrt_mu();
    CHECK(std::abs(s[0] - b.raw()[0][0]) == 0.0);
  }

  TEST_CASE("trace-free and off-diagonal blocks") {
    const CollisionBasis& b = default_basis();
    for (int i = 0; i < 3; ++i)
      CHECK(relative_residual(b, b.trace_free(i), CollisionBasis::kTraceFreeSpan) <= 1e-12);
    for (int m = 4; m < 7; ++m) CHECK(relative_residual(b, b.raw()[m], CollisionBasis::kOffDiagonalSpan) <= 1e-12);
    // The trace-free block is orthogonal to the invariants without any correction.
    CHECK(l2_norm(default_grid(), project_P0(b.trace_free(0), b)) <= 1e-12);
  }

  TEST_CASE("span of all 13 functions contains every raw function") {
    const CollisionBasis& b = default_basis();
    std::array<int, 13> all;
    for (int i = 0; i < 13; ++i) all[i] = i;
    for (const Field& r : b.raw()) CHECK(relative_residual(b, r, all) <= 1e-12);
  }

  TEST_CASE("coefficients match inner products") {
    const CollisionBasis& b = default_basis();
    const Field& f = b.raw()[10];
    const auto c = b.coefficients(f);
    for (int m = 0; m < 13; ++m) CHECK(std::abs(c[m] - inner_product(default_grid(), f, b.ortho()[m])) <= 1e-14);
  }

  TEST_CASE("grid where mu underflows off eight nodes is degenerate") {
    const VelocityGrid g = VelocityGrid::build(100.0, 4);
    try {
      CollisionBasis::build(g);
      FAIL("expected a degenerate basis");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DegenerateBasis);
    }
  }
}
