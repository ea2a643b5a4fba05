#pragma once

#include <iosfwd>

#include "superint/dynamics.hpp"
#include "superint/verify.hpp"

/// Configuration-driven front end shared by the command line tool and the
/// python module. Exit codes: 0 all assertions hold, 1 assertion failure,
/// 2 configuration or runtime error. Discrepancy entries never affect the
/// exit code.
namespace superint::runner {

using nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Validated run configuration; unknown keys are rejected.
struct RunConfig {
  std::string command;  // verify | simulate | audit | charts
  json system;          // family, parameters, profile, term lists
  std::string integral_set = "default";
  int samples = 100;
  uint64_t seed = 0x5EED;
  json tolerances;  // optional per-suite overrides
  json integrator;  // method, dt, duration, initial_q, initial_p
  json output;      // report, trajectory, drift file names

  json echo() const;
};

RunConfig parse_config(const json& j);
RunConfig load_config_file(const std::string& path);

std::vector<std::string> preset_names();
json preset(const std::string& name);

models::AngularProfile profile_from_json(const json& j);
phase::HamiltonianSystem build_system(const json& system);

/// Catalog for families that have one; throws ConfigError otherwise.
integrals::IntegralSet build_catalog(const json& system);

struct RunOutcome {
  int exit_code = 0;
  json report;
  std::vector<std::string> artifacts;  // files written
};

/// Executes the configured command and writes artifacts under out_dir.
/// Progress lines go to log when provided.
RunOutcome run(const RunConfig& cfg, const std::string& out_dir, std::ostream* log = nullptr);

}  // namespace superint::runner
