#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "esbgk/collision_basis.hpp"

namespace esbgk {

/// The nu values used by every sweep: the open interval (-1/2, 1) sampled up
/// to 0.01 from its endpoints.
std::vector<double> default_nu_sweep();

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0;   // worst observed value of the checked quantity
  double tolerance = 0;  // pass iff measured <= tolerance (or the check states otherwise)
  nlohmann::json detail = nlohmann::json::object();
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool pass() const;
  nlohmann::json to_json() const;
};

struct VerifyOptions {
  std::vector<double> nu_list = default_nu_sweep();
  std::uint64_t seed = 0;
  int fields = 1000;             // random perturbations for projection/coercivity checks
  int variation_fields = 20;     // fields for the first-variation order check
  int states = 1000;             // random non-negative states for equivalence bounds
  int directions = 64;           // unit vectors per state
  int gaussian_states = 200;     // random states for the cancellation check
  double h = 1e-4;               // finite-difference step
  std::vector<double> jacobian_nu{0.0, -3.0 / 7.0, 0.5};
};

/// Idempotency, mutual orthogonality, raw basis inner products, P1+P2 projection,
/// macro projection property.
SuiteReport verify_projections(const CollisionBasis& basis, const VerifyOptions& opts);
/// Coercivity inequality, kernel, self-adjointness, coercivity constants.
SuiteReport verify_coercivity(const CollisionBasis& basis, const VerifyOptions& opts);
/// Equilibrium Jacobian of the macroscopic map, Gaussian derivatives at mu,
/// first-variation order.
SuiteReport verify_jacobians(const CollisionBasis& basis, const VerifyOptions& opts);
/// Equivalence bounds, determinant agreement, cancellation property (raw and
/// conservative), equilibrium idempotency.
SuiteReport verify_gaussian(const CollisionBasis& basis, const VerifyOptions& opts);

const std::vector<std::string>& verification_suites();

/// Runs one suite by name, or all of them for "all". Throws InvalidParameter
/// for an unknown name.
std::vector<SuiteReport> run_verification(const std::string& suite, const CollisionBasis& basis,
                                          const VerifyOptions& opts);

nlohmann::json verification_report_json(const std::vector<SuiteReport>& reports, const VerifyOptions& opts);

}  // namespace esbgk
