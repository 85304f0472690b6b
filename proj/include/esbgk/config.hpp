#pragma once

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "json.hpp"

#include "esbgk/phase_space.hpp"
#include "esbgk/solver.hpp"

namespace esbgk {

enum class InitialKind { Maxwellian, CosineDensity, AnisotropicGaussian, Snapshot };

struct InitialCondition {
  InitialKind kind = InitialKind::Maxwellian;
  double amplitude = 0.0;                // cosine_density
  Vec3 theta_diag{1.0, 1.0, 1.0};        // anisotropic_gaussian
  Vec3 theta_offdiag{0.0, 0.0, 0.0};     // (12, 23, 31)
  double density = 1.0;
  Vec3 velocity{0.0, 0.0, 0.0};
  std::string snapshot_path;
};

/// Everything a run needs. Parsed from JSON or key=value text; see README.
struct RunConfig {
  SolverConfig solver;
  double v_max = 8.0;
  int n_per_axis = 32;
  int n_x = 16;
  double length = 2.0 * std::numbers::pi;
  InitialCondition initial;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
};

/// Parses a config file. JSON when the first non-blank character is '{',
/// otherwise `key = value` lines with '#' comments. Throws ConfigInvalid.
nlohmann::json load_config_document(const std::filesystem::path& path);
nlohmann::json parse_key_value(const std::string& text);

/// Comma-separated numbers; fractions such as -3/7 are accepted. Throws
/// ConfigInvalid naming `field` on a malformed entry.
std::vector<double> parse_number_list(const std::string& text, const std::string& field);

/// Applies ESBGK_<KEY> environment variables (KEY upper-cased) over the document.
void apply_env_overrides(nlohmann::json& doc, const char* const* envp);

/// Builds and validates a RunConfig. Throws ConfigInvalid naming the field.
RunConfig run_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const RunConfig& c);

/// FNV-1a 64 of the canonical JSON dump, hex encoded.
std::string config_hash(const RunConfig& c);

/// Samples the configured initial distribution.
DistributionField make_initial_condition(const RunConfig& c, const VelocityGrid& v_grid);

}  // namespace esbgk
