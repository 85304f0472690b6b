#include "esbgk/anisotropic_gaussian.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <sstream>

namespace esbgk {

GaussianSpec GaussianSpec::make(double rho, const Vec3& U, const Sym3& Tnu) {
  GaussianSpec g;
  g.chol_ = Cholesky3::factor(Tnu, kSpdTolerance);
  if (!g.chol_.ok) {
    std::ostringstream os;
    os << "temperature tensor pivots (" << g.chol_.pivots[0] << ", " << g.chol_.pivots[1] << ", "
       << g.chol_.pivots[2] << ") fail the positive-definiteness test";
    throw Error(ErrorKind::NotSpd, os.str());
  }
  g.rho_ = rho;
  g.U_ = U;
  g.Tnu_ = Tnu;
  g.inverse_ = g.chol_.inverse();
  g.log_norm_ = -0.5 * (3.0 * std::log(2.0 * std::numbers::pi) + g.chol_.log_det());
  return g;
}

void exp_quadratic(const VelocityGrid& grid, double c, const Vec3& b, const Sym3& A, std::span<const double> scale,
                   std::span<double> out) {
  const std::size_t n = static_cast<std::size_t>(grid.n_per_axis());
  if (out.size() != grid.size() || (!scale.empty() && scale.size() != grid.size()))
    throw Error(ErrorKind::LengthMismatch, "field does not match the grid");
  std::vector<double> axis(n);
  for (std::size_t i = 0; i < n; ++i) axis[i] = grid.node(i * n * n)[0];

  std::array<std::vector<double>, 3> diag;
  const double aii[3] = {A.xx, A.yy, A.zz};
  for (int d = 0; d < 3; ++d) {
    diag[d].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = axis[i];
      diag[d][i] = std::exp(b[d] * v + aii[d] * v * v);
    }
  }
  const auto cross_table = [&](double a) {
    std::vector<double> t(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) t[i * n + j] = std::exp(2.0 * a * axis[i] * axis[j]);
    return t;
  };
  const std::vector<double> e12 = cross_table(A.xy), e23 = cross_table(A.yz), e31 = cross_table(A.zx);
  const double ec = std::exp(c);

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double ij = diag[0][i] * diag[1][j] * e12[i * n + j];
      const std::size_t base = (i * n + j) * n;
      for (std::size_t l = 0; l < n; ++l) {
        const double value = ec * (ij * diag[2][l] * e23[j * n + l] * e31[l * n + i]);
        out[base + l] = scale.empty() ? value : scale[base + l] * value;
      }
    }
}

Field sample_gaussian(const GaussianSpec& spec, const VelocityGrid& grid) {
  // -1/2 (v-U)^T S (v-U) expanded, with S = Tnu^{-1} taken from the Cholesky solves.
  const Sym3& S = spec.inverse();
  const Vec3& U = spec.U();
  const Vec3 SU{S.xx * U[0] + S.xy * U[1] + S.zx * U[2], S.xy * U[0] + S.yy * U[1] + S.yz * U[2],
                S.zx * U[0] + S.yz * U[1] + S.zz * U[2]};
  const double c = spec.log_norm() - 0.5 * dot(U, SU);
  Field out(grid.size());
  exp_quadratic(grid, c, SU, S * -0.5, {}, out);
  if (spec.rho() != 1.0)
    for (double& x : out) x *= spec.rho();
  return out;
}

Field build_gaussian(const MomentState& state, const VelocityGrid& grid) {
  return sample_gaussian(GaussianSpec::from_state(state), grid);
}

MomentVector moment_functions(const Vec3& v) {
  return {1.0, v[0], v[1], v[2], v[0] * v[0], v[1] * v[1], v[2] * v[2], v[0] * v[1], v[1] * v[2], v[2] * v[0]};
}

MomentVector discrete_moments(std::span<const double> F, const VelocityGrid& grid) {
  const MonomialMoments m = monomial_moments(F, grid, 2);
  return {m(0, 0, 0), m(1, 0, 0), m(0, 1, 0), m(0, 0, 1), m(2, 0, 0),
          m(0, 2, 0), m(0, 0, 2), m(1, 1, 0), m(0, 1, 1), m(1, 0, 1)};
}

MonomialMoments monomial_moments(std::span<const double> F, const VelocityGrid& grid, int max_degree) {
  if (F.size() != grid.size()) throw Error(ErrorKind::LengthMismatch, "field does not match the grid");
  if (max_degree < 0 || max_degree > MonomialMoments::kMaxDegree)
    throw Error(ErrorKind::InvalidParameter, "monomial degree out of range");
  const std::size_t n = static_cast<std::size_t>(grid.n_per_axis());
  const int P = max_degree + 1;
  std::vector<double> axis(n);
  for (std::size_t i = 0; i < n; ++i) axis[i] = grid.node(i * n * n)[0];
  std::vector<double> powers(n * P);
  for (std::size_t i = 0; i < n; ++i) {
    double x = 1.0;
    for (int p = 0; p < P; ++p, x *= axis[i]) powers[i * P + p] = x;
  }

  std::array<CompensatedSum, MonomialMoments::kSide * MonomialMoments::kSide * MonomialMoments::kSide> total;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double line[MonomialMoments::kSide] = {};
      const std::size_t base = (i * n + j) * n;
      for (std::size_t l = 0; l < n; ++l) {
        const double wf = grid.weight(base + l) * F[base + l];
        const double* pw = &powers[l * P];
        for (int p = 0; p < P; ++p) line[p] += wf * pw[p];
      }
      for (int a = 0; a < P; ++a)
        for (int b = 0; a + b < P; ++b) {
          const double xy = powers[i * P + a] * powers[j * P + b];
          for (int c = 0; a + b + c < P; ++c) total[MonomialMoments::index(a, b, c)].add(xy * line[c]);
        }
    }
  MonomialMoments out;
  for (std::size_t q = 0; q < total.size(); ++q) out.values[q] = total[q].value();
  return out;
}

MomentVector gaussian_moment_targets(const MomentState& s) {
  const Sym3 second = (s.Tnu + Sym3::outer(s.U)) * s.rho;
  return {s.rho, s.rho * s.U[0], s.rho * s.U[1], s.rho * s.U[2],
          second.xx, second.yy, second.zz, second.xy, second.yz, second.zx};
}

double scaled_moment_residual(const MomentVector& a, const MomentVector& b, const MomentState& s) {
  const double theta = s.T + norm2(s.U) / 3.0;
  const double scale[3] = {s.rho, s.rho * std::sqrt(theta), s.rho * theta};
  double worst = 0;
  for (int m = 0; m < 10; ++m) {
    const int block = m == 0 ? 0 : (m < 4 ? 1 : 2);
    worst = std::max(worst, std::abs(a[m] - b[m]) / scale[block]);
  }
  return worst;
}

namespace {

using Vec10 = Eigen::Matrix<double, 10, 1>;
using Mat10 = Eigen::Matrix<double, 10, 10>;

void apply_tilt(std::span<const double> raw, const Vec10& theta, const VelocityGrid& grid, Field& out) {
  const Sym3 A{theta[4], theta[5], theta[6], 0.5 * theta[7], 0.5 * theta[8], 0.5 * theta[9]};
  exp_quadratic(grid, theta[0], {theta[1], theta[2], theta[3]}, A, raw, out);
}

constexpr int kExponents[10][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {2, 0, 0},
                                   {0, 2, 0}, {0, 0, 2}, {1, 1, 0}, {0, 1, 1}, {1, 0, 1}};

Mat10 moment_jacobian(std::span<const double> values, const VelocityGrid& grid) {
  const MonomialMoments m = monomial_moments(values, grid, 4);
  Mat10 J;
  for (int a = 0; a < 10; ++a)
    for (int b = 0; b < 10; ++b)
      J(a, b) = m(kExponents[a][0] + kExponents[b][0], kExponents[a][1] + kExponents[b][1],
                  kExponents[a][2] + kExponents[b][2]);
  return J;
}

}  // namespace

CorrectionResult conservative_correction(std::span<const double> raw_gaussian, const MomentState& target,
                                         const VelocityGrid& grid, const CorrectionOptions& opts) {
  if (raw_gaussian.size() != grid.size())
    throw Error(ErrorKind::LengthMismatch, "raw Gaussian does not match the grid");

  const MomentVector goal = gaussian_moment_targets(target);
  CorrectionResult res;
  res.values.assign(raw_gaussian.begin(), raw_gaussian.end());
  MomentVector current = discrete_moments(res.values, grid);
  res.initial_residual = res.residual = scaled_moment_residual(current, goal, target);
  if (res.residual <= opts.tol) return res;

  Vec10 theta = Vec10::Zero();
  Field trial(grid.size());
  bool stagnated = false;
  for (int it = 0; it < opts.max_newton; ++it) {
    Vec10 r;
    for (int m = 0; m < 10; ++m) r[m] = current[m] - goal[m];
    const Mat10 J = moment_jacobian(res.values, grid);
    const Eigen::LDLT<Mat10> ldlt(J);
    const Vec10 step = ldlt.solve(-r);
    ++res.iterations;

    double lambda = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 40; ++halving, lambda *= 0.5) {
      const Vec10 cand = theta + lambda * step;
      apply_tilt(raw_gaussian, cand, grid, trial);
      const MomentVector m = discrete_moments(trial, grid);
      const double rn = scaled_moment_residual(m, goal, target);
      if (std::isfinite(rn) && rn < res.residual) {
        theta = cand;
        res.values.swap(trial);
        current = m;
        res.residual = rn;
        improved = true;
        break;
      }
    }
    if (res.residual <= opts.tol) break;
    if (!improved) {
      stagnated = true;
      break;
    }
  }

  if (res.residual > opts.tol && !(stagnated && res.residual <= opts.stagnation_accept)) {
    std::ostringstream os;
    os << "moment residual " << res.residual << " after " << res.iterations
       << " Newton steps exceeds tolerance " << opts.tol;
    throw Error(ErrorKind::NoConvergence, os.str());
  }
  res.alpha = theta[0];
  res.beta = {theta[1], theta[2], theta[3]};
  res.gamma = {theta[4], theta[5], theta[6], 0.5 * theta[7], 0.5 * theta[8], 0.5 * theta[9]};
  return res;
}

}  // namespace esbgk
