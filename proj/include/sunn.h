/* C interface to the sunn library: identity-suite execution, trajectory
 * simulation, spectrum evaluation and parameter scans for the reduced
 * integrable system, driven by a single JSON configuration document.
 *
 * All returned strings are heap-allocated and must be released with
 * sunn_string_free. Functions returning sunn_status set *error_message
 * (when the pointer is non-NULL) on failure.
 */
#ifndef SUNN_H
#define SUNN_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sunn_status {
    SUNN_OK = 0,
    /* malformed configuration or arguments */
    SUNN_ERROR_INVALID_ARGUMENT = 1,
    /* input outside the mathematical domain (chamber, constraint surface, ...) */
    SUNN_ERROR_DOMAIN = 2,
    /* a numerical procedure failed */
    SUNN_ERROR_NUMERIC = 3,
    /* the run completed but at least one registered check failed */
    SUNN_CHECKS_FAILED = 4
} sunn_status;

const char* sunn_version(void);
const char* sunn_status_name(sunn_status status);

/* Opaque handle over a parsed and validated run configuration. */
typedef struct sunn_config sunn_config;

sunn_status sunn_config_parse(const char* json_text, sunn_config** out, char** error_message);
void sunn_config_free(sunn_config* config);

/* Runs the identity suite; *report_json receives the JSON report even when
 * checks fail (status SUNN_CHECKS_FAILED). */
sunn_status sunn_run_verify(const sunn_config* config, char** report_json, char** error_message);

/* Simulates one trajectory; *csv_text receives the CSV body. method_override
 * may be NULL or empty to use the configured method. */
sunn_status sunn_run_simulate(const sunn_config* config, const char* method_override,
                              char** csv_text, char** error_message);

/* Lax eigenvalues and conserved traces at the configured initial point,
 * optionally along the trajectory. */
sunn_status sunn_run_spectrum(const sunn_config* config, int along_trajectory, char** json_text,
                              char** error_message);

/* Re-runs the configured check set over the (x, u, v) grid. */
sunn_status sunn_run_scan(const sunn_config* config, char** report_json, char** error_message);

/* Lax eigenvalues (descending) and conserved traces h_1..h_n at one point of
 * the global chart. z_re/z_im have length n, as do the output arrays. */
sunn_status sunn_lax_spectrum(int n, double x, double u, double v, const double* z_re,
                              const double* z_im, double* eigenvalues_out, double* h_out,
                              char** error_message);

void sunn_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* SUNN_H */
