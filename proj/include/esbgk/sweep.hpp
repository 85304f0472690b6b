#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "esbgk/config.hpp"
#include "esbgk/diagnostics.hpp"

namespace esbgk {

struct SweepRow {
  double nu = 0;
  double prandtl = 0;  // 1 / (1 - nu)
  bool ok = false;
  std::string status;  // "ok" or the error that stopped the run
  DriftReport drift;
  std::size_t entropy_checks = 0;
  std::size_t entropy_violations = 0;
  double max_entropy_increase = 0;
  bool decay_fitted = false;
  DecayFit decay;  // perturbation L2 norm, second-half window
  bool stress_fitted = false;
  DecayFit stress;  // |Theta_12|, second-half window
  int steps = 0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  bool all_ok() const;
};

/// Runs the same initial data for every nu in `nu_list` and tabulates drift,
/// entropy audit, fitted decay rates and the Prandtl number. A failed run is
/// recorded with its error and the sweep continues.
SweepReport nu_sweep_report(const RunConfig& base, const std::vector<double>& nu_list, const DistributionField& F0,
                            const CollisionBasis& basis);

std::string sweep_csv_header();
void write_sweep_csv(std::ostream& os, const SweepReport& report);
nlohmann::json to_json(const SweepRow& row);
nlohmann::json to_json(const SweepReport& report);

/// Decay fit over the second half of the series, or nothing when the values
/// do not support one (too few samples, non-positive data).
std::optional<DecayFit> try_fit_second_half(std::span<const double> times, std::span<const double> values);

}  // namespace esbgk
