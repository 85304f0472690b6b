#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "esbgk/collision_basis.hpp"
#include "esbgk/phase_space.hpp"

namespace esbgk {

struct EntropyValue {
  double value = 0;
  std::size_t nonpositive_nodes = 0;
};

/// Sum_k w_k F_k log F_k over nodes with F_k > 0, times `cell_measure`.
EntropyValue entropy(std::span<const double> F, const VelocityGrid& grid, double cell_measure = 1.0);
/// Sum over cells with measure dx.
EntropyValue entropy(const DistributionField& F);

/// One output time of a run.
struct DiagnosticsRecord {
  double t = 0;
  double mass = 0;
  Vec3 momentum{};
  double energy = 0;  // integral of F |v|^2
  double entropy = 0;
  double perturbation_l2 = 0;  // || (F - mu) / sqrt(mu) ||_{L^2_{x,v}}
  double min_F = 0;
  double spd_margin = 0;  // min over cells of the smallest eigenvalue of Tnu
  double stress12 = 0;    // cell-averaged Theta_12
};

DiagnosticsRecord measure(const DistributionField& F, double t, double nu, const CollisionBasis& basis);

struct DiagnosticsSeries {
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<Vec3> momentum;
  std::vector<double> energy;
  std::vector<double> entropy;
  std::vector<double> perturbation_l2;
  std::vector<double> min_F;
  std::vector<double> spd_margin;
  std::vector<double> stress12;

  // Per-step entropy audit filled by the integrator.
  std::size_t entropy_checks = 0;
  std::size_t entropy_violations = 0;
  double max_entropy_increase = -std::numeric_limits<double>::infinity();
  std::vector<int> violation_steps;

  void append(const DiagnosticsRecord& r);
  std::size_t size() const { return times.size(); }
  DiagnosticsRecord record(std::size_t i) const;
};

std::string series_csv_header();
std::string series_csv_row(const DiagnosticsRecord& r);
void write_series_csv(std::ostream& os, const DiagnosticsSeries& s);
DiagnosticsSeries read_series_csv(std::istream& is);

struct DriftReport {
  double mass = 0;
  double momentum = 0;  // max over components; absolute when |Q(0)| < 1e-12
  double energy = 0;
};

/// max_t |Q(t) - Q(0)| / max(|Q(0)|, 1e-30) per invariant.
DriftReport conservation_drift(const DiagnosticsSeries& s);

struct FitWindow {
  double t_start = 0;
  double t_end = 0;
};

struct DecayFit {
  double rate = 0;
  double intercept = 0;
  double r_squared = 0;
  FitWindow window;
  std::size_t samples = 0;
  bool truncated = false;  // window shrunk to the positive prefix
};

/// Second half of the sampled time span.
FitWindow second_half_window(std::span<const double> times);

/// Least-squares line through (t, log value) inside the window; rate = -slope.
/// Throws InsufficientSamples below 10 points.
DecayFit fit_decay_rate(std::span<const double> times, std::span<const double> values,
                        std::optional<FitWindow> window = std::nullopt);

}  // namespace esbgk
