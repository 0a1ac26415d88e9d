#ifndef PAPRSIM_H
#define PAPRSIM_H

/* C interface to the paprsim library: OFDM PAPR-reduction experiments with
 * PTS phase optimization (exhaustive, iterative flipping, CE, PMCE).
 *
 * All functions returning paprsim_status set a thread-local message
 * retrievable via paprsim_last_error() on failure. Strings returned through
 * char** out-parameters are owned by the caller and must be released with
 * paprsim_string_free().
 */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define PAPRSIM_VERSION "0.1.0"

typedef enum paprsim_status {
  PAPRSIM_OK = 0,
  PAPRSIM_ERR_INVALID_ARGUMENT = 1,
  PAPRSIM_ERR_BUDGET_EXCEEDED = 2,
  PAPRSIM_ERR_DEGENERATE_INPUT = 3,
  PAPRSIM_ERR_IO = 4,
  PAPRSIM_ERR_INTERNAL = 5
} paprsim_status;

typedef struct paprsim_config paprsim_config;
typedef struct paprsim_result paprsim_result;

const char* paprsim_version(void);
const char* paprsim_status_name(paprsim_status status);

/* Message for the most recent failure on this thread; empty string if none. */
const char* paprsim_last_error(void);

/* ---- configuration ------------------------------------------------- */

/* New config with the reference defaults (N=256, M=8, W=2, L=4, rho=0.1,
 * alpha=0.6, J=40, 1e5 symbols, all methods). */
paprsim_config* paprsim_config_new(void);
void paprsim_config_free(paprsim_config* cfg);

/* Keys match the JSON config / CLI flag names, e.g. "n_subcarriers",
 * "m_subblocks", "w_alphabet", "oversampling", "n_symbols", "rho", "alpha",
 * "samples", "max_iterations", "convergence_eps", "master_seed",
 * "grid_min_db", "grid_max_db", "grid_step_db", "opts_budget_cap",
 * "search_eval_budget", "workers", "scheme", "methods", "thresholds_db".
 * "methods" and "thresholds_db" take comma-separated strings. */
paprsim_status paprsim_config_set_int(paprsim_config* cfg, const char* key,
                                      int64_t value);
paprsim_status paprsim_config_set_real(paprsim_config* cfg, const char* key,
                                       double value);
paprsim_status paprsim_config_set_str(paprsim_config* cfg, const char* key,
                                      const char* value);

/* Merge a JSON object over the current values; unknown keys are rejected
 * and leave the config unchanged. */
paprsim_status paprsim_config_load_json(paprsim_config* cfg, const char* json_text);
paprsim_status paprsim_config_to_json(const paprsim_config* cfg, char** out_json);
paprsim_status paprsim_config_validate(const paprsim_config* cfg);

/* ---- experiments ---------------------------------------------------- */

typedef void (*paprsim_progress_fn)(int64_t done, int64_t total, void* user);

paprsim_status paprsim_run_ccdf(const paprsim_config* cfg,
                                paprsim_progress_fn progress, void* user,
                                paprsim_result** out);
paprsim_status paprsim_run_search_count(const paprsim_config* cfg,
                                        paprsim_progress_fn progress, void* user,
                                        paprsim_result** out);
/* method: "none", "opts", "ipts", "ce" or "pmce". */
paprsim_status paprsim_run_single(const paprsim_config* cfg, const char* method,
                                  paprsim_result** out);

/* Runs the embedded invariant suite; returns the number of failed checks.
 * verbose != 0 prints one line per check to stdout. */
int paprsim_selftest(int verbose);

/* ---- results -------------------------------------------------------- */

void paprsim_result_free(paprsim_result* res);
paprsim_status paprsim_result_to_json(const paprsim_result* res, char** out);
paprsim_status paprsim_result_to_csv(const paprsim_result* res, char** out);
/* Short human-readable digest (key quantiles / averages). */
paprsim_status paprsim_result_summary(const paprsim_result* res, char** out);

void paprsim_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* PAPRSIM_H */
