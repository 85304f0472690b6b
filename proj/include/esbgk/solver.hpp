#pragma once

#include <functional>
#include <string>

#include "esbgk/anisotropic_gaussian.hpp"
#include "esbgk/diagnostics.hpp"
#include "esbgk/phase_space.hpp"

namespace esbgk {

enum class TransportScheme { Upwind1, None };

TransportScheme parse_transport_scheme(const std::string& name);
std::string to_string(TransportScheme scheme);

struct SolverConfig {
  double nu = 0.0;
  double dt = 1e-3;
  double t_end = 1.0;
  double cfl = 1.0;
  bool conservative = true;
  TransportScheme transport = TransportScheme::Upwind1;
  int output_every = 1;    // steps between diagnostics records
  int snapshot_every = 0;  // 0 disables periodic snapshots
  int entropy_every = 1;   // steps between entropy audits
  double entropy_tol = 1e-10;
  int threads = 1;
  CorrectionOptions correction = kTightCorrection;
};

/// Throws InvalidParameter / NuOutOfRange / CflViolation.
void validate(const SolverConfig& config, const SpatialGrid& x_grid, const VelocityGrid& v_grid);

/// CFL number dt * max|v_1| / dx.
double cfl_number(double dt, const SpatialGrid& x_grid, const VelocityGrid& v_grid);

/// Implicit-in-F relaxation per cell:
///   F_new = (F + dt A M_nu(F)) / (1 + dt A),  A = rho T / (1 - nu).
DistributionField relaxation_step(const DistributionField& F, double dt, double nu, bool conservative,
                                  const CorrectionOptions& correction = kTightCorrection, int threads = 1);

/// First-order upwind advection along x by v_1, periodic. Throws CflViolation
/// when dt max|v_1| / dx exceeds `cfl`.
DistributionField transport_step(const DistributionField& F, double dt, double cfl = 1.0, int threads = 1);

/// transport(dt/2), relaxation(dt), transport(dt/2); transport is skipped when
/// the scheme is None.
DistributionField strang_step(const DistributionField& F, double dt, const SolverConfig& config);

struct SimulationSinks {
  std::function<void(const DiagnosticsRecord&)> on_record;
  std::function<void(int step, double t, const DistributionField&)> on_snapshot;
  /// Called with the last valid state before an error is rethrown.
  std::function<void(int step, double t, const DistributionField&, const Error&)> on_abort;
};

struct SimulationResult {
  DistributionField final_state;
  DiagnosticsSeries series;
  int steps = 0;
  double t = 0;
};

SimulationResult run_simulation(DistributionField F0, const SolverConfig& config, const CollisionBasis& basis,
                                const SimulationSinks& sinks = {});

/// Runs fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace esbgk
