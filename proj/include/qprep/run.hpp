// run.hpp -- config-driven experiment dispatcher with manifests.
#pragma once

#include "qprep/config.hpp"

#include <string>
#include <vector>

namespace qprep {

inline constexpr const char* kVersion = "1.0.0";

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunManifest {
  std::string kind;
  std::string config_hash;
  std::string version;
  unsigned seed = 0;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;
  std::vector<CheckResult> checks;
  std::vector<std::string> artifacts;  // files written under out_dir

  bool all_pass() const;
  std::string to_json() const;
};

// Dispatches the experiment named by cfg.kind, writes CSV artifacts and
// `manifest.json` under out_dir (created if missing), and returns the
// manifest.  Deterministic for fixed config + seed.
RunManifest run_experiment(const ExperimentConfig& cfg,
                           const std::string& out_dir, int threads = 1);

// Aggregates manifest files into a summary: a text table and a CSV body
// (columns: status, kind, config_hash, checks_passed, checks_total, path),
// failing rows first.  Throws on empty input or unreadable files.
std::string report_from_manifests(const std::vector<std::string>& paths,
                                  std::string* csv_out = nullptr);

}  // namespace qprep
