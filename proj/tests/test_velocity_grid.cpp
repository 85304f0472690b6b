#include <cmath>
#include <numbers>

#include "doctest.h"
#include "esbgk/collision_basis.hpp"
#include "support.hpp"

using namespace esbgk;
using test_support::default_grid;

namespace {

// Independent 1D midpoint sums: sum_i h c_i^p exp(-c_i^2/2) / sqrt(2 pi).
double axis_moment(double v_max, int n, int p) {
  const double h = 2.0 * v_max / n;
  long double s = 0;
  for (int i = 0; i < n; ++i) {
    const double c = -v_max + (i + 0.5) * h;
    s += h * std::pow(c, p) * std::exp(-0.5 * c * c) / std::sqrt(2.0 * std::numbers::pi);
  }
  return static_cast<double>(s);
}

}  // namespace

TEST_SUITE("velocity_grid") {
  TEST_CASE("default grid has 32768 nodes of weight 0.125") {
    const VelocityGrid& g = default_grid();
    CHECK(g.size() == 32768u);
    CHECK(g.spacing() == 0.5);
    for (double w : g.weights()) REQUIRE(w == 0.125);
    CompensatedSum total;
    for (double w : g.weights()) total.add(w);
    CHECK(std::abs(total.value() - 4096.0) <= 1e-12 * 4096.0);
  }

  TEST_CASE("invalid parameters are rejected") {
    const auto kind_of = [](double v_max, int n) {
      try {
        VelocityGrid::build(v_max, n);
      } catch (const Error& e) {
        return e.kind();
      }
      return ErrorKind::Io;
    };
    CHECK(kind_of(1.0, 3) == ErrorKind::InvalidParameter);
    CHECK(kind_of(1.0, 2) == ErrorKind::InvalidParameter);
    CHECK(kind_of(0.0, 32) == ErrorKind::InvalidParameter);
    CHECK(kind_of(-8.0, 32) == ErrorKind::InvalidParameter);
    CHECK_NOTHROW(VelocityGrid::build(1.0, 4));
  }

  TEST_CASE("nodes are symmetric under reflection and lie in the cube") {
    const VelocityGrid& g = default_grid();
    for (std::size_t k = 0; k < g.size(); ++k) {
      const Vec3& v = g.node(k);
      const Vec3& m = g.node(g.mirror(k));
      REQUIRE(m[0] == -v[0]);
      REQUIRE(m[1] == -v[1]);
      REQUIRE(m[2] == -v[2]);
      REQUIRE(g.weight(g.mirror(k)) == g.weight(k));
      REQUIRE(std::abs(v[0]) < 8.0);
      REQUIRE(v[0] != 0.0);
    }
    CHECK(g.max_abs_node_speed() == 7.75);
  }

  TEST_CASE("quadrature of mu against an independent summation") {
    const VelocityGrid& g = default_grid();
    const auto mu = sample_global_maxwellian(g);
    const double s0 = axis_moment(8.0, 32, 0), s2 = axis_moment(8.0, 32, 2);

    const double mass = integrate_moment(g, mu, [](const Vec3&) { return 1.0; });
    CHECK(std::abs(mass - 1.0) <= 1e-8);
    CHECK(std::abs(mass - s0 * s0 * s0) <= 1e-13);

    CHECK(std::abs(integrate_moment(g, mu, [](const Vec3& v) { return v[0]; })) <= 1e-14);
    CHECK(std::abs(integrate_moment(g, mu, [](const Vec3& v) { return v[0] * v[1] * v[1]; })) <= 1e-14);

    const double energy = integrate_moment(g, mu, [](const Vec3& v) { return norm2(v); });
    CHECK(std::abs(energy - 3.0) <= 1e-7);
    CHECK(std::abs(energy - 3.0 * s2 * s0 * s0) <= 1e-13);

    const double var = integrate_moment(g, mu, [](const Vec3& v) { return v[0] * v[0]; });
    CHECK(std::abs(var - 1.0) <= 1e-7);
  }

  TEST_CASE("length mismatch") {
    const VelocityGrid& g = default_grid();
    std::vector<double> short_field(10, 1.0);
    try {
      integrate_moment(g, short_field, [](const Vec3&) { return 1.0; });
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::LengthMismatch);
    }
  }

  TEST_CASE("mu samples are positive and bounded") {
    const VelocityGrid& g = default_grid();
    const auto mu = sample_global_maxwellian(g);
    const double peak = std::pow(2.0 * std::numbers::pi, -1.5);
    for (double x : mu) REQUIRE(x > 0.0);
    CHECK(*std::max_element(mu.begin(), mu.end()) < peak);
    const double c = g.v_max() - 0.5 * g.spacing();
    CHECK(mu[g.index(0, 0, 0)] == doctest::Approx(peak * std::exp(-1.5 * c * c)).epsilon(1e-13));
  }

  TEST_CASE("moments of mu converge under refinement") {
    double prev_mass = 1.0, prev_energy = 1.0;
    for (int n : {16, 32, 64}) {
      const VelocityGrid g = VelocityGrid::build(8.0, n);
      const auto mu = sample_global_maxwellian(g);
      const double em = std::abs(integrate(g, mu) - 1.0);
      const double ee = std::abs(integrate_moment(g, mu, [](const Vec3& v) { return norm2(v); }) - 3.0);
      CAPTURE(n);
      CHECK(em <= std::max(prev_mass, 1e-12));
      CHECK(ee <= std::max(prev_energy, 1e-12));
      prev_mass = em;
      prev_energy = ee;
    }
  }

  TEST_CASE("trace-free family sums to zero at every node") {
    const CollisionBasis& b = test_support::default_basis();
    const Field c0 = b.trace_free(0), c1 = b.trace_free(1), c2 = b.trace_free(2);
    double worst = 0;
    for (std::size_t k = 0; k < c0.size(); ++k) worst = std::max(worst, std::abs(c0[k] + c1[k] + c2[k]));
    CHECK(worst <= 1e-16);
  }

  TEST_CASE("compensated summation recovers small addends") {
    CompensatedSum s;
    s.add(1.0);
    for (int i = 0; i < 1000; ++i) s.add(1e-17);
    s.add(-1.0);
    CHECK(std::abs(s.value() - 1e-14) <= 1e-27);
  }
}
