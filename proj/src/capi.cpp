// capi.cpp -- C shim over the config/run machinery (opaque session handle).
#include "qprep.h"

#include "qprep/run.hpp"

#include <string>
#include <vector>

struct qprep_session {
  std::string config_text;
  std::string last_error;
  std::string manifest_json;
  std::string report_text;
};

namespace {

int fail(qprep_session* s, int code, const std::string& msg) {
  if (s) s->last_error = msg;
  return code;
}

}  // namespace

extern "C" {

const char* qprep_version(void) { return qprep::kVersion; }

qprep_session* qprep_session_open(void) { return new qprep_session(); }

void qprep_session_close(qprep_session* s) { delete s; }

int qprep_session_load_config(qprep_session* s, const char* path) {
  if (!s || !path) return QPREP_ERR_INVALID_ARGUMENT;
  try {
    qprep::ExperimentConfig cfg = qprep::load_config(path);  // validate now
    s->config_text = cfg.source_text;
    s->last_error.clear();
    return QPREP_OK;
  } catch (const qprep::ConfigError& e) {
    return fail(s, QPREP_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(s, QPREP_ERR_RUNTIME, e.what());
  }
}

int qprep_session_set(qprep_session* s, const char* key, const char* value) {
  if (!s || !key || !value) return QPREP_ERR_INVALID_ARGUMENT;
  s->config_text += std::string(key) + " = " + value + "\n";
  s->last_error.clear();
  return QPREP_OK;
}

int qprep_session_run(qprep_session* s, const char* out_dir) {
  if (!s || !out_dir) return QPREP_ERR_INVALID_ARGUMENT;
  try {
    qprep::ExperimentConfig cfg = qprep::parse_config_text(s->config_text);
    qprep::RunManifest man = qprep::run_experiment(cfg, out_dir);
    s->manifest_json = man.to_json();
    s->last_error.clear();
    return man.all_pass() ? QPREP_OK : QPREP_ERR_CHECKS_FAILED;
  } catch (const qprep::ConfigError& e) {
    return fail(s, QPREP_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(s, QPREP_ERR_RUNTIME, e.what());
  }
}

const char* qprep_session_manifest_json(const qprep_session* s) {
  if (!s || s->manifest_json.empty()) return nullptr;
  return s->manifest_json.c_str();
}

const char* qprep_session_last_error(const qprep_session* s) {
  return s ? s->last_error.c_str() : "";
}

const char* qprep_report(qprep_session* s, const char* const* manifest_paths,
                         int count) {
  if (!s || !manifest_paths || count <= 0) return nullptr;
  try {
    std::vector<std::string> paths(manifest_paths, manifest_paths + count);
    s->report_text = qprep::report_from_manifests(paths);
    s->last_error.clear();
    return s->report_text.c_str();
  } catch (const std::exception& e) {
    s->last_error = e.what();
    return nullptr;
  }
}

}  // extern "C"
