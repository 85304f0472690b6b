#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <span>
#include <string>

#include "esbgk/collision_basis.hpp"

namespace test_support {

inline const esbgk::VelocityGrid& default_grid() {
  static const esbgk::VelocityGrid g = esbgk::VelocityGrid::build(8.0, 32);
  return g;
}

inline const esbgk::CollisionBasis& default_basis() {
  static const esbgk::CollisionBasis b = esbgk::CollisionBasis::build(default_grid());
  return b;
}

inline double max_abs(std::span<const double> a) {
  double m = 0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

/// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto p = std::filesystem::current_path() / "test_scratch" / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace test_support
