#ifndef PRACTIQ_H
#define PRACTIQ_H

/*
 * practiq - conversational text-to-SQL dataset generation and benchmarking.
 *
 * The shared library exposes the pipeline behind an opaque session handle.
 * Every operation takes a JSON options document and fills a JSON (or scalar)
 * result; strings returned through out-parameters are owned by the library
 * and must be released with practiq_free().
 *
 * Status codes mirror the CLI exit codes.
 */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define PRACTIQ_OK 0
#define PRACTIQ_ERR_INTERNAL 1
#define PRACTIQ_ERR_INPUT 2
#define PRACTIQ_ERR_VALIDATION 3
#define PRACTIQ_ERR_PROVIDER 4

typedef struct practiq_session practiq_session;

const char* practiq_version(void);

practiq_session* practiq_session_open(void);
void practiq_session_close(practiq_session* session);

/* Message for the most recent failing call on this session; empty string when
 * the last call succeeded. The pointer stays valid until the next call on the
 * same session. */
const char* practiq_errmsg(const practiq_session* session);

void practiq_free(char* text);

/*
 * Generate a dataset.
 * options: {"catalog": path, "examples": path, "db_dir": path, "out": path,
 *           "seed": n, "provider": "mock"|"mock-answerable"|"live",
 *           "categories": [token, ...] (optional),
 *           "helpful_fraction": f (optional), "quota": n (optional),
 *           "jobs": n (optional)}
 * result: generation statistics JSON.
 */
int practiq_generate(practiq_session* session, const char* options_json, char** result_json);

/*
 * Re-execute and re-check an existing dataset.
 * options: {"dataset": path, "db_dir": path}
 * result: validation report JSON. Returns PRACTIQ_ERR_VALIDATION when any
 * conversation violates its invariants.
 */
int practiq_validate(practiq_session* session, const char* options_json, char** result_json);

/*
 * Per-category counts for a dataset.
 * options: {"dataset": path}
 * result: {"per_category": {token: n}, "total": n}
 */
int practiq_dataset_stats(practiq_session* session, const char* options_json,
                          char** result_json);

/*
 * Question-category classification benchmark.
 * options: {"dataset": path, "db_dir": path, "k": 0..3,
 *           "values": "lexicalOnly"|"lexicalAndOracle",
 *           "provider": spec, "seed": n}
 * result: evaluation report JSON.
 */
int practiq_bench_classify(practiq_session* session, const char* options_json,
                           char** result_json);

/*
 * Clarification-SQL prediction benchmark.
 * options: {"dataset": path, "db_dir": path, "strategy": "single"|"dinsql",
 *           "provider": spec, "seed": n, "order_sensitive": bool (optional)}
 * result: evaluation report JSON with the failure-taxonomy breakdown.
 */
int practiq_bench_sql(practiq_session* session, const char* options_json, char** result_json);

/*
 * Krippendorff's alpha over a ratings CSV (unit_id,rater_id,score).
 * options: {"ratings": path, "level": "ordinal"|"nominal"}
 */
int practiq_alpha(practiq_session* session, const char* options_json, double* out_alpha);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PRACTIQ_H */
