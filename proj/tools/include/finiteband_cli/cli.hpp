#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "finiteband/potential.hpp"

namespace finiteband::cli {

enum ExitCode { Pass = 0, IdentityFailure = 1, ConfigFailure = 2, NumericalFailure = 3 };

struct Grid {
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
  std::vector<double> values() const;
};

struct RunConfig {
  BandStructure bands;
  std::size_t m = 1;
  std::uint64_t seed = 0;
  std::optional<HochstadtSpec> spec;  // present iff the spectrum has one gap
  std::string u_source;               // "identity", "matrix" or "random:<seed>"
  Grid x_grid;
  Grid lambda_grid;
  double eta = 0.05;
  int z_probes = 50;
  double z_radius = 20.0;
  std::map<std::string, double> tolerances;
  int n() const { return bands.n(); }
};

std::map<std::string, double> default_tolerances();

// Validates the whole document before anything is computed; ConfigError messages name the field path.
RunConfig parse_config(const std::string& json_text, const std::vector<std::string>& tol_overrides = {},
                       std::optional<std::uint64_t> seed_override = std::nullopt);

struct ReportEntry {
  std::string name;
  std::string identity;
  double max_residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct Report {
  std::vector<ReportEntry> entries;
  bool pass() const;
};

// Potential described by the config (constant for no gaps, elliptic otherwise).
std::unique_ptr<Potential> make_potential(const RunConfig& cfg);

void cmd_construct(const RunConfig& cfg, const std::filesystem::path& out);
Report verify_profile(const RunConfig& cfg, const PotentialProfile& profile);
Report cmd_verify(const RunConfig& cfg, const std::filesystem::path& out,
                  const std::optional<std::filesystem::path>& profile);
void cmd_sample(const RunConfig& cfg, const std::filesystem::path& out);

std::string report_to_json(const Report& r);

// Full command line; returns the process exit code.
int run(int argc, char** argv);

}  // namespace finiteband::cli
