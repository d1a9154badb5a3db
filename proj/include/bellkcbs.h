/*
 * bellkcbs — C interface to the pentagon Bell/contextuality toolkit.
 *
 * Every function returns a bk_status code (BK_OK == 0 on success) and writes
 * its results through out-parameters.  Objects are opaque handles created and
 * destroyed through their bk_*_create / bk_*_free pairs; strings returned
 * through char** out-parameters are heap-allocated and must be released with
 * bk_string_free().  On failure the out-parameters are left untouched and
 * bk_last_error() describes the problem (per thread, valid until the next
 * failing call).
 */

#ifndef BELLKCBS_H_
#define BELLKCBS_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32) || defined(__CYGWIN__)
#define BK_API __declspec(dllexport)
#else
#define BK_API __attribute__((visibility("default")))
#endif

enum bk_status {
    BK_OK = 0,
    BK_ERR_INVALID_ARGUMENT = 1, /* bad parameter, null pointer, stale handle */
    BK_ERR_DOMAIN = 2,           /* request outside the model's domain        */
    BK_ERR_STRUCTURE = 3,        /* inconsistent behavior/dataset structure   */
    BK_ERR_NUMERIC = 4,          /* numerical guard tripped                   */
    BK_ERR_PARSE = 5,            /* malformed JSON or identifier              */
    BK_ERR_IO = 6,               /* file system failure                       */
    BK_ERR_INTERNAL = 7          /* unexpected failure; see bk_last_error()   */
};

typedef struct bk_model_struct* bk_model_t;
typedef struct bk_behavior_struct* bk_behavior_t;
typedef struct bk_dataset_struct* bk_dataset_t;

/* Library identity and error reporting. */
BK_API const char* bk_version(void);
BK_API const char* bk_status_name(int status);
BK_API const char* bk_last_error(void);
BK_API void bk_string_free(char* text);

/*
 * Model: the two-qubit-by-qutrit state family at mixing angle phi with state
 * angles (theta_u, theta_v), measured with the fixed pentagon observables.
 * Creating a model computes its full behavior and both witness values.
 */
BK_API int bk_model_create(bk_model_t* out, double phi, double theta_u, double theta_v);
BK_API int bk_model_free(bk_model_t model);
BK_API int bk_model_params(bk_model_t model, double* phi, double* theta_u, double* theta_v);
BK_API int bk_model_alpha_beta(bk_model_t model, double* alpha, double* beta);
/* Region is one of "neither", "contextual_only", "nonlocal_only", "both";
 * the pointer is static and must not be freed. */
BK_API int bk_model_region(bk_model_t model, const char** region);
BK_API int bk_model_behavior(bk_model_t model, bk_behavior_t* out);
/* Witness values plus all nine measured correlators as a JSON object. */
BK_API int bk_model_correlators_json(bk_model_t model, char** json);
/* Finite-statistics simulation: multinomial counts per context, bootstrap
 * sigmas, witness totals with linearly combined errors, and the sampled
 * no-disturbance distance.  Deterministic in (seed, counts, resamples). */
BK_API int bk_model_simulate_json(bk_model_t model, uint64_t counts_per_context,
                                  uint64_t seed, int resamples, char** json);

/*
 * Behavior: probability tables p(a, b | x, context), keyed "x<x>_ctx<y1>[_<y2>]"
 * in JSON, each table in lexicographic outcome order (Alice-major, -1 first).
 */
BK_API int bk_behavior_from_json(bk_behavior_t* out, const char* json);
BK_API int bk_behavior_to_json(bk_behavior_t behavior, char** json);
BK_API int bk_behavior_free(bk_behavior_t behavior);
BK_API int bk_behavior_alpha_beta(bk_behavior_t behavior, double* alpha, double* beta);
/* Structural + no-signalling + no-disturbance checks at tolerance tol.
 * passed receives 1/0; report_json lists every violated equality. */
BK_API int bk_behavior_check(bk_behavior_t behavior, double tol, int* passed,
                             char** report_json);
BK_API int bk_behavior_disturbance_distance(bk_behavior_t behavior, double* distance);

/* Parameter-space tools (all on the pentagon scenario). */
BK_API int bk_scan_csv(double phi_min, double phi_max, int steps, double theta_u,
                       double theta_v, char** csv);
/* Largest phi interval in [0, pi/2] violating both bounds at once; empty
 * receives 1 when there is none. */
BK_API int bk_violation_window(double theta_u, double theta_v, double resolution,
                               int* empty, double* lo, double* hi);
/* Exact classical bounds from vertex enumeration, as a JSON object. */
BK_API int bk_classical_bounds_json(char** json);
/* Derivative-free maximization over (theta_u, theta_v) at fixed phi.
 * Objectives: "max_min_margin", "weighted_sum(w)" with w in [0,1],
 * "max_beta_given_alpha_above(d)". */
BK_API int bk_optimize_json(double phi, const char* objective, char** json);

/*
 * Dataset: recorded witness measurements (bundled copy compiled in, or loaded
 * from JSON).  Verification recomputes every derivable number and cross-checks
 * the documented-discrepancy flags both ways.
 */
BK_API int bk_dataset_bundled(bk_dataset_t* out);
BK_API int bk_dataset_load(bk_dataset_t* out, const char* path);
BK_API int bk_dataset_parse(bk_dataset_t* out, const char* json);
BK_API int bk_dataset_free(bk_dataset_t dataset);
BK_API int bk_dataset_size(bk_dataset_t dataset, size_t* count);
BK_API int bk_dataset_to_json(bk_dataset_t dataset, char** json);
BK_API int bk_dataset_verify_json(bk_dataset_t dataset, double theta_u, double theta_v,
                                  int* all_passed, char** report_json);
/* Writes curve.csv, points.csv, bounds.csv into output_dir; paths_json
 * receives a JSON array of the written paths. */
BK_API int bk_dataset_emit_figures(bk_dataset_t dataset, double theta_u, double theta_v,
                                   int curve_steps, const char* output_dir,
                                   char** paths_json);

#ifdef __cplusplus
}
#endif

#endif /* BELLKCBS_H_ */
