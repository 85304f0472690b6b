#include "esbgk/diagnostics.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "esbgk/moments.hpp"

namespace esbgk {

EntropyValue entropy(std::span<const double> F, const VelocityGrid& grid, double cell_measure) {
  if (F.size() != grid.size()) throw Error(ErrorKind::LengthMismatch, "field does not match the grid");
  EntropyValue out;
  const auto h = accumulate_blocked<1>(F.size(), [&](std::size_t k, std::array<double, 1>& p) {
    if (F[k] > 0.0) p[0] += grid.weight(k) * F[k] * std::log(F[k]);
  });
  for (double x : F)
    if (!(x > 0.0)) ++out.nonpositive_nodes;
  out.value = h[0] * cell_measure;
  return out;
}

EntropyValue entropy(const DistributionField& F) {
  EntropyValue total;
  CompensatedSum acc;
  for (int i = 0; i < F.n_x(); ++i) {
    const EntropyValue e = entropy(F.cell(i), F.v_grid(), F.x_grid().dx());
    acc.add(e.value);
    total.nonpositive_nodes += e.nonpositive_nodes;
  }
  total.value = acc.value();
  return total;
}

DiagnosticsRecord measure(const DistributionField& F, double t, double nu, const CollisionBasis& basis) {
  const VelocityGrid& grid = F.v_grid();
  const double dx = F.x_grid().dx();
  const Field& mu = basis.mu();

  DiagnosticsRecord r;
  r.t = t;
  r.min_F = std::numeric_limits<double>::infinity();
  r.spd_margin = std::numeric_limits<double>::infinity();
  CompensatedSum mass, p0, p1, p2, energy, pert, stress;
  for (int i = 0; i < F.n_x(); ++i) {
    const auto cell = F.cell(i);
    const auto m = accumulate_blocked<6>(cell.size(), [&](std::size_t k, std::array<double, 6>& p) {
      const double wf = grid.weight(k) * cell[k];
      const Vec3& v = grid.node(k);
      p[0] += wf;
      p[1] += wf * v[0];
      p[2] += wf * v[1];
      p[3] += wf * v[2];
      p[4] += wf * norm2(v);
      const double d = cell[k] - mu[k];
      p[5] += grid.weight(k) * d * d / mu[k];
    });
    mass.add(m[0] * dx);
    p0.add(m[1] * dx);
    p1.add(m[2] * dx);
    p2.add(m[3] * dx);
    energy.add(m[4] * dx);
    pert.add(m[5] * dx);
    for (double x : cell) r.min_F = std::min(r.min_F, x);

    const MomentState s = compute_moments(cell, grid, nu);
    r.spd_margin = std::min(r.spd_margin, eigenvalues(s.Tnu)[0]);
    stress.add(s.Theta.xy / F.n_x());
  }
  r.mass = mass.value();
  r.momentum = {p0.value(), p1.value(), p2.value()};
  r.energy = energy.value();
  r.perturbation_l2 = std::sqrt(std::max(0.0, pert.value()));
  r.stress12 = stress.value();
  r.entropy = entropy(F).value;
  return r;
}

void DiagnosticsSeries::append(const DiagnosticsRecord& r) {
  times.push_back(r.t);
  mass.push_back(r.mass);
  momentum.push_back(r.momentum);
  energy.push_back(r.energy);
  entropy.push_back(r.entropy);
  perturbation_l2.push_back(r.perturbation_l2);
  min_F.push_back(r.min_F);
  spd_margin.push_back(r.spd_margin);
  stress12.push_back(r.stress12);
}

DiagnosticsRecord DiagnosticsSeries::record(std::size_t i) const {
  return {times[i], mass[i], momentum[i], energy[i], entropy[i], perturbation_l2[i], min_F[i], spd_margin[i],
          stress12[i]};
}

std::string series_csv_header() {
  return "t,mass,momentum1,momentum2,momentum3,energy,entropy,perturbation_l2,min_F,spd_margin,stress12";
}

std::string series_csv_row(const DiagnosticsRecord& r) {
  std::ostringstream os;
  os.precision(17);
  os << r.t << ',' << r.mass << ',' << r.momentum[0] << ',' << r.momentum[1] << ',' << r.momentum[2] << ','
     << r.energy << ',' << r.entropy << ',' << r.perturbation_l2 << ',' << r.min_F << ',' << r.spd_margin << ','
     << r.stress12;
  return os.str();
}

void write_series_csv(std::ostream& os, const DiagnosticsSeries& s) {
  os << series_csv_header() << '\n';
  for (std::size_t i = 0; i < s.size(); ++i) os << series_csv_row(s.record(i)) << '\n';
}

DiagnosticsSeries read_series_csv(std::istream& is) {
  DiagnosticsSeries s;
  std::string line;
  if (!std::getline(is, line) || line != series_csv_header())
    throw Error(ErrorKind::Io, "diagnostics CSV header not recognized");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::array<double, 11> v{};
    std::string tok;
    for (std::size_t c = 0; c < v.size(); ++c) {
      if (!std::getline(ls, tok, ',')) throw Error(ErrorKind::Io, "short diagnostics CSV row");
      v[c] = std::stod(tok);
    }
    s.append({v[0], v[1], {v[2], v[3], v[4]}, v[5], v[6], v[7], v[8], v[9], v[10]});
  }
  return s;
}

DriftReport conservation_drift(const DiagnosticsSeries& s) {
  if (s.size() == 0) throw Error(ErrorKind::InsufficientSamples, "empty diagnostics series");
  const auto rel = [](double q0, double q) { return std::abs(q - q0) / std::max(std::abs(q0), 1e-30); };
  DriftReport d;
  for (std::size_t i = 0; i < s.size(); ++i) {
    d.mass = std::max(d.mass, rel(s.mass[0], s.mass[i]));
    d.energy = std::max(d.energy, rel(s.energy[0], s.energy[i]));
    for (int c = 0; c < 3; ++c) {
      const double q0 = s.momentum[0][c], q = s.momentum[i][c];
      d.momentum = std::max(d.momentum, std::abs(q0) < 1e-12 ? std::abs(q - q0) : rel(q0, q));
    }
  }
  return d;
}

FitWindow second_half_window(std::span<const double> times) {
  if (times.empty()) return {};
  const double t0 = times.front(), t1 = times.back();
  return {t0 + 0.5 * (t1 - t0), t1};
}

DecayFit fit_decay_rate(std::span<const double> times, std::span<const double> values,
                        std::optional<FitWindow> window) {
  if (times.size() != values.size()) throw Error(ErrorKind::LengthMismatch, "times and values differ in length");
  DecayFit fit;
  fit.window = window.value_or(second_half_window(times));

  std::vector<double> ts, ys;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < fit.window.t_start || times[i] > fit.window.t_end) continue;
    if (!(values[i] > 0.0)) {
      fit.truncated = true;
      break;
    }
    ts.push_back(times[i]);
    ys.push_back(std::log(values[i]));
  }
  if (fit.truncated && !ts.empty()) fit.window.t_end = ts.back();
  fit.samples = ts.size();
  if (ts.size() < 10)
    throw Error(ErrorKind::InsufficientSamples,
                "decay fit needs at least 10 positive samples, window holds " + std::to_string(ts.size()));

  const double n = static_cast<double>(ts.size());
  double tm = 0, ym = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    tm += ts[i];
    ym += ys[i];
  }
  tm /= n;
  ym /= n;
  double stt = 0, sty = 0, syy = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    stt += (ts[i] - tm) * (ts[i] - tm);
    sty += (ts[i] - tm) * (ys[i] - ym);
    syy += (ys[i] - ym) * (ys[i] - ym);
  }
  const double slope = stt > 0 ? sty / stt : 0.0;
  fit.rate = -slope;
  fit.intercept = ym - slope * tm;
  if (syy <= 0.0) {
    fit.r_squared = 1.0;
  } else {
    double sse = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double e = ys[i] - (fit.intercept + slope * ts[i]);
      sse += e * e;
    }
    fit.r_squared = std::clamp(1.0 - sse / syy, 0.0, 1.0);
  }
  return fit;
}

}  // namespace esbgk
