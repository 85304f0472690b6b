#include "esbgk/config.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "esbgk/moments.hpp"
#include "esbgk/snapshot.hpp"

namespace esbgk {

using nlohmann::json;

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "nu",        "dt",         "t_end",         "cfl",           "conservative",  "transport",
      "output_every", "snapshot_every", "entropy_every", "entropy_tol", "threads",      "v_max",
      "n_per_axis", "n_x",       "length",        "initial",       "amplitude",     "theta_diag",
      "theta_offdiag", "density", "velocity",     "snapshot_path", "seed",          "out_dir"};
  return keys;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    double num = 0, den = 0;
    if (!parse_number(trim(s.substr(0, slash)), num) || !parse_number(trim(s.substr(slash + 1)), den)) return false;
    if (den == 0.0) return false;
    out = num / den;
    return true;
  }
  std::size_t used = 0;
  try {
    out = std::stod(s, &used);
  } catch (...) {
    return false;
  }
  return used == s.size();
}

json parse_scalar(const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true") return true;
  if (s == "false") return false;
  if (s.find(',') != std::string::npos) {
    json arr = json::array();
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      double v = 0;
      if (!parse_number(trim(tok), v)) return s;
      arr.push_back(v);
    }
    return arr;
  }
  double v = 0;
  if (parse_number(s, v)) {
    if (s.find_first_of(".eE/") == std::string::npos && std::abs(v) < 9e15) return static_cast<std::int64_t>(v);
    return v;
  }
  return s;
}

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::ConfigInvalid, "field '" + field + "': " + why);
}

template <class T>
T get(const json& doc, const std::string& key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    invalid(key, std::string("wrong type (") + e.what() + ")");
  }
}

Vec3 get_vec3(const json& doc, const std::string& key, Vec3 fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (!v.is_array() || v.size() != 3) invalid(key, "expected three numbers");
  try {
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  } catch (const json::exception&) {
    invalid(key, "expected three numbers");
  }
}

InitialKind parse_initial(const std::string& s) {
  if (s == "maxwellian") return InitialKind::Maxwellian;
  if (s == "cosine_density") return InitialKind::CosineDensity;
  if (s == "anisotropic_gaussian") return InitialKind::AnisotropicGaussian;
  if (s == "snapshot") return InitialKind::Snapshot;
  invalid("initial", "unknown kind '" + s + "' (maxwellian | cosine_density | anisotropic_gaussian | snapshot)");
}

std::string initial_name(InitialKind k) {
  switch (k) {
    case InitialKind::Maxwellian: return "maxwellian";
    case InitialKind::CosineDensity: return "cosine_density";
    case InitialKind::AnisotropicGaussian: return "anisotropic_gaussian";
    case InitialKind::Snapshot: return "snapshot";
  }
  return "maxwellian";
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    double v = 0;
    if (!parse_number(tok, v)) invalid(field, "'" + tok + "' is not a number");
    out.push_back(v);
  }
  return out;
}

json parse_key_value(const std::string& text) {
  json doc = json::object();
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::ConfigInvalid, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorKind::ConfigInvalid, "line " + std::to_string(lineno) + ": empty key");
    doc[key] = parse_scalar(line.substr(eq + 1));
  }
  return doc;
}

json load_config_document(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::ConfigInvalid, "cannot read config file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  const std::string text = ss.str();
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    try {
      return json::parse(body);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::ConfigInvalid, std::string("malformed JSON config: ") + e.what());
    }
  }
  return parse_key_value(text);
}

void apply_env_overrides(json& doc, const char* const* envp) {
  if (!envp) return;
  constexpr const char* prefix = "ESBGK_";
  const std::size_t plen = std::strlen(prefix);
  for (const char* const* e = envp; *e; ++e) {
    const std::string entry = *e;
    if (entry.compare(0, plen, prefix) != 0) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) continue;
    std::string key = entry.substr(plen, eq - plen);
    for (char& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (!known_keys().count(key)) continue;
    doc[key] = parse_scalar(entry.substr(eq + 1));
  }
}

RunConfig run_config_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::ConfigInvalid, "config must be an object of key/value pairs");
  for (const auto& [key, value] : doc.items())
    if (!known_keys().count(key)) invalid(key, "unknown configuration key");

  RunConfig c;
  SolverConfig& s = c.solver;
  s.nu = get<double>(doc, "nu", s.nu);
  s.dt = get<double>(doc, "dt", s.dt);
  s.t_end = get<double>(doc, "t_end", s.t_end);
  s.cfl = get<double>(doc, "cfl", s.cfl);
  s.conservative = get<bool>(doc, "conservative", s.conservative);
  s.output_every = get<int>(doc, "output_every", s.output_every);
  s.snapshot_every = get<int>(doc, "snapshot_every", s.snapshot_every);
  s.entropy_every = get<int>(doc, "entropy_every", s.entropy_every);
  s.entropy_tol = get<double>(doc, "entropy_tol", s.entropy_tol);
  s.threads = get<int>(doc, "threads", s.threads);
  c.v_max = get<double>(doc, "v_max", c.v_max);
  c.n_per_axis = get<int>(doc, "n_per_axis", c.n_per_axis);
  c.n_x = get<int>(doc, "n_x", c.n_x);
  c.length = get<double>(doc, "length", c.length);
  c.seed = get<std::uint64_t>(doc, "seed", c.seed);
  c.out_dir = get<std::string>(doc, "out_dir", c.out_dir);

  try {
    s.transport = parse_transport_scheme(get<std::string>(doc, "transport", "upwind1"));
  } catch (const Error& e) {
    invalid("transport", e.what());
  }

  InitialCondition& ic = c.initial;
  ic.kind = parse_initial(get<std::string>(doc, "initial", "maxwellian"));
  ic.amplitude = get<double>(doc, "amplitude", ic.amplitude);
  ic.theta_diag = get_vec3(doc, "theta_diag", ic.theta_diag);
  ic.theta_offdiag = get_vec3(doc, "theta_offdiag", ic.theta_offdiag);
  ic.density = get<double>(doc, "density", ic.density);
  ic.velocity = get_vec3(doc, "velocity", ic.velocity);
  ic.snapshot_path = get<std::string>(doc, "snapshot_path", ic.snapshot_path);

  // Validation happens here, before any grid or field is allocated.
  if (!(s.nu > -0.5 && s.nu < 1.0))
    invalid("nu", "must lie in the open interval (-1/2, 1) with both endpoints excluded, got " + std::to_string(s.nu));
  if (!(c.v_max > 0.0)) invalid("v_max", "must be positive");
  if (c.n_per_axis < 4 || c.n_per_axis % 2 != 0) invalid("n_per_axis", "must be even and >= 4");
  if (c.n_x < 1) invalid("n_x", "must be >= 1");
  if (!(c.length > 0.0)) invalid("length", "must be positive");
  if (!(s.dt > 0.0)) invalid("dt", "must be positive");
  if (!(s.t_end >= 0.0)) invalid("t_end", "must be non-negative");
  if (!(s.cfl > 0.0 && s.cfl <= 1.0)) invalid("cfl", "must lie in (0, 1]");
  if (s.output_every < 1) invalid("output_every", "must be >= 1");
  if (s.snapshot_every < 0) invalid("snapshot_every", "must be >= 0");
  if (s.entropy_every < 0) invalid("entropy_every", "must be >= 0");
  if (s.threads < 1) invalid("threads", "must be >= 1");
  if (s.transport != TransportScheme::None && c.n_x > 1) {
    const double h = 2.0 * c.v_max / c.n_per_axis;
    const double number = s.dt * (c.v_max - 0.5 * h) / (c.length / c.n_x);
    if (number > s.cfl)
      invalid("dt", "CFL number dt*v_max/dx = " + std::to_string(number) + " exceeds cfl = " + std::to_string(s.cfl));
  }
  switch (ic.kind) {
    case InitialKind::CosineDensity:
      if (!(std::abs(ic.amplitude) < 1.0)) invalid("amplitude", "|amplitude| must be < 1 to keep F0 positive");
      break;
    case InitialKind::AnisotropicGaussian: {
      if (!(ic.density > 0.0)) invalid("density", "must be positive");
      const Sym3 theta{ic.theta_diag[0], ic.theta_diag[1], ic.theta_diag[2],
                       ic.theta_offdiag[0], ic.theta_offdiag[1], ic.theta_offdiag[2]};
      if (!check_spd_and_det(theta).is_spd) invalid("theta_diag", "stress tensor must be positive definite");
      break;
    }
    case InitialKind::Snapshot:
      if (ic.snapshot_path.empty()) invalid("snapshot_path", "required for initial = snapshot");
      break;
    case InitialKind::Maxwellian:
      break;
  }
  return c;
}

json to_json(const RunConfig& c) {
  const SolverConfig& s = c.solver;
  const InitialCondition& ic = c.initial;
  return {{"nu", s.nu},
          {"dt", s.dt},
          {"t_end", s.t_end},
          {"cfl", s.cfl},
          {"conservative", s.conservative},
          {"transport", to_string(s.transport)},
          {"output_every", s.output_every},
          {"snapshot_every", s.snapshot_every},
          {"entropy_every", s.entropy_every},
          {"entropy_tol", s.entropy_tol},
          {"threads", s.threads},
          {"v_max", c.v_max},
          {"n_per_axis", c.n_per_axis},
          {"n_x", c.n_x},
          {"length", c.length},
          {"initial", initial_name(ic.kind)},
          {"amplitude", ic.amplitude},
          {"theta_diag", ic.theta_diag},
          {"theta_offdiag", ic.theta_offdiag},
          {"density", ic.density},
          {"velocity", ic.velocity},
          {"snapshot_path", ic.snapshot_path},
          {"seed", c.seed},
          {"out_dir", c.out_dir}};
}

std::string config_hash(const RunConfig& c) {
  json j = to_json(c);
  // Execution-only settings do not change results.
  j.erase("threads");
  j.erase("out_dir");
  const std::string text = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

DistributionField make_initial_condition(const RunConfig& c, const VelocityGrid& v_grid) {
  const SpatialGrid x_grid = SpatialGrid::make(c.n_x, c.length);
  const InitialCondition& ic = c.initial;
  switch (ic.kind) {
    case InitialKind::Maxwellian: {
      DistributionField F(x_grid, v_grid);
      const Field mu = sample_global_maxwellian(v_grid);
      for (int i = 0; i < x_grid.n_x; ++i) std::copy(mu.begin(), mu.end(), F.cell(i).begin());
      return F;
    }
    case InitialKind::CosineDensity: {
      // (1 + a cos(2 pi x / L)) mu, rescaled so the discrete mass of mu is one.
      DistributionField F(x_grid, v_grid);
      const Field mu = sample_global_maxwellian(v_grid);
      const double m0 = integrate(v_grid, mu);
      for (int i = 0; i < x_grid.n_x; ++i) {
        const double factor = (1.0 + ic.amplitude * std::cos(2.0 * std::numbers::pi * x_grid.center(i) / c.length)) / m0;
        auto cell = F.cell(i);
        for (std::size_t k = 0; k < cell.size(); ++k) cell[k] = factor * mu[k];
      }
      return F;
    }
    case InitialKind::AnisotropicGaussian: {
      DistributionField F(x_grid, v_grid);
      const Sym3 theta{ic.theta_diag[0], ic.theta_diag[1], ic.theta_diag[2],
                       ic.theta_offdiag[0], ic.theta_offdiag[1], ic.theta_offdiag[2]};
      const Field g = sample_gaussian(GaussianSpec::make(ic.density, ic.velocity, theta), v_grid);
      for (int i = 0; i < x_grid.n_x; ++i) std::copy(g.begin(), g.end(), F.cell(i).begin());
      return F;
    }
    case InitialKind::Snapshot:
      return read_snapshot(ic.snapshot_path, x_grid, v_grid);
  }
  throw Error(ErrorKind::ConfigInvalid, "unhandled initial condition");
}

}  // namespace esbgk
