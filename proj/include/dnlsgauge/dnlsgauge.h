/* C interface to the dnlsgauge library. Opaque handles, status codes and
 * JSON strings for structured results. Strings returned through `char**`
 * out-parameters are owned by the caller and released with dg_string_free. */
#ifndef DNLSGAUGE_DNLSGAUGE_H
#define DNLSGAUGE_DNLSGAUGE_H

#include <stddef.h>
#include <stdint.h>

#if defined(DG_BUILDING_LIBRARY)
#define DG_API __attribute__((visibility("default")))
#else
#define DG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dg_status {
  DG_OK = 0,
  DG_INVALID_ARGUMENT = 1,
  DG_PARSE_ERROR = 2,
  DG_IO_ERROR = 3,
  DG_NUMERIC_ERROR = 4,
  DG_STARVATION = 5,
  DG_LIMIT = 6,
  DG_INTERNAL = 7
} dg_status;

typedef struct dg_spectral dg_spectral;

/* Message of the last failure on this thread; empty after a success. */
DG_API const char* dg_last_error(void);
DG_API const char* dg_version(void);
DG_API void dg_string_free(char* s);

/* coeffs: 2*cutoff+1 interleaved (re, im) pairs ordered n = -N..N; NULL gives zeros. */
DG_API dg_status dg_spectral_create(int cutoff, const double* coeffs, dg_spectral** out);
DG_API dg_status dg_spectral_from_json(const char* json, dg_spectral** out);
DG_API dg_status dg_spectral_load(const char* path, dg_spectral** out);
DG_API dg_status dg_spectral_to_json(const dg_spectral* u, char** out_json);
DG_API void dg_spectral_destroy(dg_spectral* u);
DG_API int dg_spectral_cutoff(const dg_spectral* u);
/* Writes u(n) into re/im; zero outside the stored window. */
DG_API dg_status dg_spectral_coeff(const dg_spectral* u, int n, double* re, double* im);

DG_API dg_status dg_gauge_potential(const dg_spectral* u, int N, dg_spectral** out);
/* Result JSON: {"value": <spectral>, "output_cutoff", "tail_mass"}. */
DG_API dg_status dg_gauge_exact(const dg_spectral* u, double alpha, int oversample_factor, char** out_json);
/* step_count <= 0 picks ceil(64 |alpha| max(1, ||P_N u||^2)).
 * Result JSON: {"final", "l2_drift", "divergence_integral"[, "trajectory"]}. */
DG_API dg_status dg_gauge_truncated(const dg_spectral* u, double alpha, int N, int step_count,
                                    int store_trajectory, char** out_json);

DG_API dg_status dg_f_n(const dg_spectral* u, int N, double s, double* out);
/* Result JSON: {"value", "split": {"f_less", "f_geq"}, "truncation_error_bound", "series_terms"}. */
DG_API dg_status dg_f_split(const dg_spectral* u, int N, double s, double tol, char** out_json);
DG_API dg_status dg_divergence(const dg_spectral* u, int N, double* out);
DG_API dg_status dg_jacobian_log_det(const dg_spectral* u, double alpha, int N, int step_count, double* out);
DG_API dg_status dg_lp_stats(const dg_spectral* u, int N, double s, double s_prime, int n0, char** out_json);

/* radius <= 0 means unrestricted. */
DG_API dg_status dg_sample(double s, int cutoff, double radius, uint64_t master_seed, uint64_t stream_id,
                           uint64_t index, dg_spectral** out);
DG_API dg_status dg_sample_batch_json(double s, int cutoff, double radius, uint64_t master_seed,
                                      uint64_t count, uint64_t stream_id, char** out_json);

/* Result JSON: {"value", "zzbar_total", "zz_total", "zzbar": [...24], "zz": [...24], "permutations"}. */
DG_API dg_status dg_second_moment_diff(int N, int M, double s, char** out_json);

/* Runs a study config or manifest (JSON text). workers < 0 keeps the config
 * value; output_dir NULL keeps it. Result JSON lists the written artifacts. */
DG_API dg_status dg_run_study(const char* config_json, int workers, const char* output_dir, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* DNLSGAUGE_DNLSGAUGE_H */
