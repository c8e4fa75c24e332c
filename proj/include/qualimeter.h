/* Qualimeter C API: opaque handles and status codes over the C++ core.
 *
 * Every function returning qm_status follows the same conventions:
 *   - QM_OK (0) on success;
 *   - on failure, *errmsg (when non-NULL) receives a heap-allocated
 *     description that the caller must release with qm_string_free();
 *   - output parameters are left untouched on failure.
 *
 * Status values deliberately mirror the CLI exit codes.
 */

#ifndef QUALIMETER_H
#define QUALIMETER_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct qm_model qm_model;

typedef enum qm_status {
    QM_OK = 0,
    QM_ERR_VALIDATION = 1, /* parse errors, rule errors, bad thresholds */
    QM_ERR_USAGE = 2,      /* bad arguments, unknown modes */
    QM_ERR_IO = 3          /* unreadable/unwritable files */
} qm_status;

const char* qm_version(void);

void qm_string_free(char* s);

/* ---- models ---- */

qm_status qm_model_parse(const char* qmdl_text, qm_model** out, char** errmsg);
qm_status qm_model_load(const char* path, qm_model** out, char** errmsg);
void qm_model_free(qm_model* model);

/* Canonical QMDL text. */
qm_status qm_model_serialize(const qm_model* model, char** out, char** errmsg);

/* Derivation-rule check. ruleset_overrides_path may be NULL. When as_json
 * is nonzero the report is a JSON document, otherwise one line per
 * violation plus a "N errors, M warnings" trailer. */
qm_status qm_model_validate(const qm_model* model,
                            const char* ruleset_overrides_path, int as_json,
                            char** report, int* n_errors, int* n_warnings,
                            char** errmsg);

/* ---- one-shot evaluation ---- */

/* format: "json" (dashboard document) or "md" (summary). as_of is an
 * ISO-8601 UTC timestamp. */
qm_status qm_evaluate(const char* model_path, const char* records_path,
                      const char* as_of, const char* format, char** out,
                      char** errmsg);

/* mode: "structural" or "weighted". */
qm_status qm_diversity(const char* population_path, const char* mode,
                       double* pi, char** errmsg);

/* ---- measurement process ---- */

/* dependencies is a semicolon-separated list; scope, environment,
 * dependencies and lessons_path may be NULL. Writes a context JSON file. */
qm_status qm_init_context(const char* objectives_path, const char* scope,
                          const char* environment, const char* dependencies,
                          const char* lessons_path, const char* out_path,
                          char** errmsg);

/* frequency e.g. "24h". Writes a plan JSON file referencing model_path. */
qm_status qm_plan(const char* context_path, const char* model_path,
                  const char* frequency, const char* lifecycle_stage,
                  const char* project_dir, const char* out_path, char** errmsg);

/* Appends validated records to the plan's store. diagnostics (may be NULL)
 * receives one line per rejected record. */
qm_status qm_ingest(const char* plan_path, const char* records_path,
                    const char* project_dir, long* accepted,
                    char** diagnostics, char** errmsg);

/* Full execution cycle; writes reports/<as_of>/{dashboard.json, summary.md,
 * detailed.json} under project_dir. report_dir (may be NULL) receives the
 * report directory path. */
qm_status qm_run(const char* plan_path, const char* as_of,
                 const char* project_dir, char** report_dir, char** errmsg);

/* Re-emits the latest report's summary. */
qm_status qm_report_latest(const char* plan_path, const char* project_dir,
                           char** out, char** errmsg);

#ifdef __cplusplus
}
#endif

#endif /* QUALIMETER_H */
