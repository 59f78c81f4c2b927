/* qprep.h -- C interface to the quantum state-preparation laboratory.
 *
 * Usage pattern:
 *   qprep_session* s = qprep_session_open();
 *   qprep_session_load_config(s, "experiment.cfg");     (or _set key/value)
 *   qprep_session_run(s, "out_dir");
 *   puts(qprep_session_manifest_json(s));
 *   qprep_session_close(s);
 *
 * All functions returning int yield QPREP_OK (0) on success; on failure a
 * diagnostic is available from qprep_session_last_error().  Strings returned
 * by the library are owned by the session (or by the library for
 * qprep_version) and remain valid until the next call on the same session.
 */
#ifndef QPREP_H
#define QPREP_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct qprep_session qprep_session;

enum {
  QPREP_OK = 0,
  QPREP_ERR_INVALID_ARGUMENT = 1,
  QPREP_ERR_CONFIG = 2,
  QPREP_ERR_RUNTIME = 3,
  QPREP_ERR_CHECKS_FAILED = 4 /* run finished but a gated check is red */
};

/* Library semantic version, e.g. "1.0.0". */
const char* qprep_version(void);

qprep_session* qprep_session_open(void);
void qprep_session_close(qprep_session* s);

/* Replace the session config with the contents of a config file. */
int qprep_session_load_config(qprep_session* s, const char* path);

/* Set one `key = value` config entry (accumulated, parsed at run time). */
int qprep_session_set(qprep_session* s, const char* key, const char* value);

/* Execute the configured experiment; CSV artifacts and manifest.json are
 * written under out_dir.  Returns QPREP_OK when every gated check passes,
 * QPREP_ERR_CHECKS_FAILED when the run completed with red checks. */
int qprep_session_run(qprep_session* s, const char* out_dir);

/* Manifest of the last completed run as a JSON document, or NULL. */
const char* qprep_session_manifest_json(const qprep_session* s);

/* Human-readable diagnostic for the last failing call, or "". */
const char* qprep_session_last_error(const qprep_session* s);

/* Aggregate manifest files into a summary table (text).  The result is
 * stored in the session and returned; NULL on failure. */
const char* qprep_report(qprep_session* s, const char* const* manifest_paths,
                         int count);

#ifdef __cplusplus
}
#endif

#endif /* QPREP_H */
