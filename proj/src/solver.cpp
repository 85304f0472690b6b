#include "esbgk/solver.hpp"

#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "esbgk/moments.hpp"

namespace esbgk {

TransportScheme parse_transport_scheme(const std::string& name) {
  if (name == "upwind1") return TransportScheme::Upwind1;
  if (name == "none") return TransportScheme::None;
  throw Error(ErrorKind::InvalidParameter, "unknown transport scheme '" + name + "' (expected upwind1 or none)");
}

std::string to_string(TransportScheme scheme) { return scheme == TransportScheme::Upwind1 ? "upwind1" : "none"; }

double cfl_number(double dt, const SpatialGrid& x_grid, const VelocityGrid& v_grid) {
  return dt * v_grid.max_abs_node_speed() / x_grid.dx();
}

void validate(const SolverConfig& c, const SpatialGrid& x_grid, const VelocityGrid& v_grid) {
  require_nu_in_range(c.nu);
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw Error(ErrorKind::InvalidParameter, "dt must be positive");
  if (!(c.t_end >= 0.0)) throw Error(ErrorKind::InvalidParameter, "t_end must be non-negative");
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw Error(ErrorKind::InvalidParameter, "cfl must lie in (0, 1]");
  if (c.output_every < 1) throw Error(ErrorKind::InvalidParameter, "output_every must be >= 1");
  if (c.snapshot_every < 0) throw Error(ErrorKind::InvalidParameter, "snapshot_every must be >= 0");
  if (c.entropy_every < 0) throw Error(ErrorKind::InvalidParameter, "entropy_every must be >= 0");
  if (c.threads < 1) throw Error(ErrorKind::InvalidParameter, "threads must be >= 1");
  if (c.transport != TransportScheme::None && x_grid.n_x > 1) {
    const double cfl = cfl_number(c.dt, x_grid, v_grid);
    if (cfl > c.cfl)
      throw Error(ErrorKind::CflViolation, "dt * v_max / dx = " + std::to_string(cfl) + " exceeds cfl " +
                                               std::to_string(c.cfl));
  }
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const int workers = std::min(threads, n);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

DistributionField relaxation_step(const DistributionField& F, double dt, double nu, bool conservative,
                                  const CorrectionOptions& correction, int threads) {
  require_nu_in_range(nu);
  DistributionField out = F;
  if (dt == 0.0) return out;
  const VelocityGrid& grid = F.v_grid();
  parallel_for(F.n_x(), threads, [&](int i) {
    const auto cell = F.cell(i);
    const MomentState s = compute_moments(cell, grid, nu);
    Field M = build_gaussian(s, grid);
    if (conservative) M = conservative_correction(M, s, grid, correction).values;
    const double a = dt * collision_frequency(s);
    const double keep = 1.0 / (1.0 + a), gain = a / (1.0 + a);
    auto dst = out.cell(i);
    for (std::size_t k = 0; k < cell.size(); ++k) dst[k] = keep * cell[k] + gain * M[k];
  });
  return out;
}

DistributionField transport_step(const DistributionField& F, double dt, double cfl, int threads) {
  const SpatialGrid& xg = F.x_grid();
  const VelocityGrid& vg = F.v_grid();
  DistributionField out = F;
  if (dt == 0.0 || xg.n_x == 1) return out;
  const double number = cfl_number(std::abs(dt), xg, vg);
  if (number > cfl)
    throw Error(ErrorKind::CflViolation,
                "dt * v_max / dx = " + std::to_string(number) + " exceeds cfl " + std::to_string(cfl));

  const int n = xg.n_x;
  const std::size_t nv = vg.size();
  const double ratio = dt / xg.dx();
  const auto& src = F.values();
  auto& dst = out.values();
  // Velocity nodes are independent; split them into contiguous chunks.
  const int chunks = std::max(1, threads);
  parallel_for(chunks, threads, [&](int c) {
    const std::size_t begin = nv * c / chunks, end = nv * (c + 1) / chunks;
    for (std::size_t k = begin; k < end; ++k) {
      const double v1 = vg.node(k)[0];
      const double c1 = std::abs(v1) * ratio;
      const int up = v1 > 0 ? -1 : 1;
      for (int i = 0; i < n; ++i) {
        const double here = src[static_cast<std::size_t>(i) * nv + k];
        const double upstream = src[static_cast<std::size_t>(xg.wrap(i + up)) * nv + k];
        dst[static_cast<std::size_t>(i) * nv + k] = here - c1 * (here - upstream);
      }
    }
  });
  return out;
}

DistributionField strang_step(const DistributionField& F, double dt, const SolverConfig& c) {
  if (c.transport == TransportScheme::None || F.n_x() == 1)
    return relaxation_step(F, dt, c.nu, c.conservative, c.correction, c.threads);
  DistributionField half = transport_step(F, 0.5 * dt, c.cfl, c.threads);
  DistributionField relaxed = relaxation_step(half, dt, c.nu, c.conservative, c.correction, c.threads);
  return transport_step(relaxed, 0.5 * dt, c.cfl, c.threads);
}

SimulationResult run_simulation(DistributionField F0, const SolverConfig& config, const CollisionBasis& basis,
                                const SimulationSinks& sinks) {
  validate(config, F0.x_grid(), F0.v_grid());
  SimulationResult res;
  res.final_state = std::move(F0);
  DistributionField& F = res.final_state;

  const auto record = [&](double t) {
    const DiagnosticsRecord r = measure(F, t, config.nu, basis);
    res.series.append(r);
    if (sinks.on_record) sinks.on_record(r);
  };

  const int steps = static_cast<int>(std::ceil(config.t_end / config.dt - 1e-9));
  double t = 0.0;
  record(t);
  if (sinks.on_snapshot && config.snapshot_every > 0) sinks.on_snapshot(0, t, F);

  double h_prev = config.entropy_every > 0 ? entropy(F).value : 0.0;
  for (int n = 1; n <= steps; ++n) {
    const double t_next = n == steps ? config.t_end : n * config.dt;
    const double dt = t_next - t;
    try {
      F = strang_step(F, dt, config);
    } catch (const Error& e) {
      if (sinks.on_abort) sinks.on_abort(n - 1, t, F, e);
      throw;
    }
    t = t_next;
    res.steps = n;

    if (config.entropy_every > 0 && n % config.entropy_every == 0) {
      const double h = entropy(F).value;
      const double increase = h - h_prev;
      ++res.series.entropy_checks;
      res.series.max_entropy_increase = std::max(res.series.max_entropy_increase, increase);
      if (increase > config.entropy_tol) {
        ++res.series.entropy_violations;
        res.series.violation_steps.push_back(n);
      }
      h_prev = h;
    }
    if (n % config.output_every == 0 || n == steps) record(t);
    if (sinks.on_snapshot && config.snapshot_every > 0 && (n % config.snapshot_every == 0 || n == steps))
      sinks.on_snapshot(n, t, F);
  }
  res.t = t;
  return res;
}

}  // namespace esbgk
