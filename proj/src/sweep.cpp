#include "esbgk/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "esbgk/moments.hpp"
#include "esbgk/solver.hpp"

namespace esbgk {

using nlohmann::json;

bool SweepReport::all_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.ok; });
}

std::optional<DecayFit> try_fit_second_half(std::span<const double> times, std::span<const double> values) {
  if (times.size() < 2) return std::nullopt;
  try {
    return fit_decay_rate(times, values, second_half_window(times));
  } catch (const Error&) {
    return std::nullopt;
  }
}

SweepReport nu_sweep_report(const RunConfig& base, const std::vector<double>& nu_list, const DistributionField& F0,
                            const CollisionBasis& basis) {
  if (nu_list.empty()) throw Error(ErrorKind::ConfigInvalid, "field 'nu_list': at least one value is required");
  for (double nu : nu_list) require_nu_in_range(nu);

  SweepReport report;
  for (double nu : nu_list) {
    SweepRow row;
    row.nu = nu;
    row.prandtl = prandtl_number(nu);
    SolverConfig cfg = base.solver;
    cfg.nu = nu;
    try {
      const SimulationResult res = run_simulation(F0, cfg, basis);
      const DiagnosticsSeries& s = res.series;
      row.steps = res.steps;
      row.drift = conservation_drift(s);
      row.entropy_checks = s.entropy_checks;
      row.entropy_violations = s.entropy_violations;
      row.max_entropy_increase = s.entropy_checks > 0 ? s.max_entropy_increase : 0.0;
      if (auto fit = try_fit_second_half(s.times, s.perturbation_l2)) {
        row.decay_fitted = true;
        row.decay = *fit;
      }
      if (!s.stress12.empty() && std::abs(s.stress12.front()) > 1e-8) {
        std::vector<double> magnitude(s.stress12.size());
        std::transform(s.stress12.begin(), s.stress12.end(), magnitude.begin(), [](double x) { return std::abs(x); });
        if (auto fit = try_fit_second_half(s.times, magnitude)) {
          row.stress_fitted = true;
          row.stress = *fit;
        }
      }
      row.ok = true;
      row.status = "ok";
    } catch (const Error& e) {
      row.status = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string sweep_csv_header() {
  return "nu,prandtl,status,steps,mass_drift,momentum_drift,energy_drift,entropy_checks,entropy_violations,"
         "max_entropy_increase,decay_rate,decay_r_squared,stress12_rate,stress12_r_squared";
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_sweep_csv(std::ostream& os, const SweepReport& report) {
  os << sweep_csv_header() << '\n';
  const auto old_precision = os.precision(17);
  for (const SweepRow& r : report.rows) {
    os << r.nu << ',' << r.prandtl << ',' << csv_quote(r.status) << ',' << r.steps << ',' << r.drift.mass << ','
       << r.drift.momentum << ',' << r.drift.energy << ',' << r.entropy_checks << ',' << r.entropy_violations << ','
       << r.max_entropy_increase << ',';
    if (r.decay_fitted) os << r.decay.rate << ',' << r.decay.r_squared;
    else os << ',';
    os << ',';
    if (r.stress_fitted) os << r.stress.rate << ',' << r.stress.r_squared;
    else os << ',';
    os << '\n';
  }
  os.precision(old_precision);
}

namespace {

json fit_json(const DecayFit& f) {
  return {{"rate", f.rate},
          {"intercept", f.intercept},
          {"r_squared", f.r_squared},
          {"window", {f.window.t_start, f.window.t_end}},
          {"samples", f.samples},
          {"truncated", f.truncated}};
}

}  // namespace

json to_json(const SweepRow& r) {
  json j = {{"nu", r.nu},
            {"prandtl", r.prandtl},
            {"ok", r.ok},
            {"status", r.status},
            {"steps", r.steps},
            {"drift", {{"mass", r.drift.mass}, {"momentum", r.drift.momentum}, {"energy", r.drift.energy}}},
            {"entropy", {{"checks", r.entropy_checks},
                         {"violations", r.entropy_violations},
                         {"max_increase", r.max_entropy_increase}}}};
  j["decay"] = r.decay_fitted ? fit_json(r.decay) : json(nullptr);
  j["stress12_decay"] = r.stress_fitted ? fit_json(r.stress) : json(nullptr);
  return j;
}

json to_json(const SweepReport& report) {
  json rows = json::array();
  for (const SweepRow& r : report.rows) rows.push_back(to_json(r));
  return {{"rows", rows}, {"all_ok", report.all_ok()}};
}

}  // namespace esbgk
