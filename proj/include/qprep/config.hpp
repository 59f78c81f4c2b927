// config.hpp -- structured-text experiment configuration.
//
// Format: one `key = value` per line, `#` comments, dotted section keys
// (atom.*, formfactor.*, schedule.*, experiment.*).  Unknown keys are hard
// errors; the schema is versioned via `schema.version`.
#pragma once

#include "qprep/model.hpp"

#include <stdexcept>
#include <string>

namespace qprep {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  int schema_version = 1;
  std::string kind;  // validate | lindblad | dyson-compare | prepare |
                     // thermal | kp-check | cluster-demo | grid

  AtomModel atom;
  FormFactor form_factor;
  CouplingSchedule schedule = CouplingSchedule::decaying(0.1, -0.25);

  // numeric knobs (defaults chosen for the n=2 probe model)
  double tau = 8.0;        // Van Hove window constant
  double eps0 = 0.05;      // remainder budget for the convergence criterion
  double beta = 1.0;       // inverse temperature (thermal runs)
  double lambda = 0.05;    // frozen coupling (dyson-compare)
  double horizon = 3.0;    // window length t - s (dyson-compare)
  double t_end = 40.0;     // simulation end time (prepare)
  double sample_dt = 1.0;  // CSV sampling step (prepare)
  double r_max = 10.0;     // radial support cut for mode quadrature
  int k_max = 2;           // expansion order cap
  int modes = 64;          // field modes (prepare; 0 = auto from horizon)
  int n_max = 2;           // photon cap
  int grid_steps = 8;      // grid subcommand / kp-check interval count
  unsigned seed = 12345;
  int initial_level = -1;  // -1 = highest level
  std::string initial_kind = "vacuum";  // vacuum | one-photon
  std::string observable = "ground";    // ground-projector expectation

  std::string source_text;  // raw config text (hashing, reproducibility)
};

// Parses and validates; throws ConfigError with a line diagnostic.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Two-column (r, phi) whitespace-separated text -> tabulated form factor.
FormFactor load_tabulated_profile(const std::string& path);

// FNV-1a hash of the raw config text, hex-encoded.
std::string config_hash(const std::string& text);

}  // namespace qprep
