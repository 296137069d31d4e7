/*
 * C interface to the wiretap simulator.
 *
 * Every function returns a wt_status. On failure a description of the most
 * recent error on the calling thread is available from wt_last_error().
 * Objects are opaque handles released by their matching *_destroy call;
 * destroying NULL is a no-op.
 */
#ifndef WIRETAP_WIRETAP_H
#define WIRETAP_WIRETAP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(WIRETAP_BUILDING)
#    define WT_API __declspec(dllexport)
#  else
#    define WT_API __declspec(dllimport)
#  endif
#else
#  define WT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wt_status {
    WT_OK = 0,
    WT_ERR_INVALID_ARGUMENT = 1,  /* null pointer, bad enum, buffer too small */
    WT_ERR_VALIDATION = 2,        /* configuration or experiment spec rejected */
    WT_ERR_DOMAIN = 3,            /* argument outside an operation's domain */
    WT_ERR_OUT_OF_DESIGN_REGION = 4,
    WT_ERR_SAMPLE_BUDGET = 5,
    WT_ERR_QUANTIZER = 6,
    WT_ERR_IO = 7,
    WT_ERR_INTERNAL = 8
} wt_status;

typedef enum wt_scheme {
    WT_SCHEME_SEPARATION = 0,
    WT_SCHEME_UNCODED = 1,
    WT_SCHEME_HYBRID = 2,
    WT_SCHEME_OUTER_BOUND = 3
} wt_scheme;

typedef enum wt_provenance { WT_PROVENANCE_ANALYTIC = 0, WT_PROVENANCE_MONTECARLO = 1 } wt_provenance;

typedef struct wt_system_params {
    double power;
    double noise_var_design;
    double noise_var_eve;
    double source_var;
    double leakage_budget_bits;
} wt_system_params;

typedef struct wt_scheme_params {
    double separation_rate_bits;
    double uncoded_kappa;
    double hybrid_alpha;
    double hybrid_rate_bits;
    double hybrid_residual_scale;
    double hybrid_beta;
} wt_scheme_params;

typedef struct wt_distortion_point {
    double snr_a_linear;
    double distortion;
    double leakage_bound_bits;
    wt_scheme scheme;
    wt_provenance provenance;
} wt_distortion_point;

typedef struct wt_mc_settings {
    int64_t block_length;
    int64_t trials;
    uint64_t seed;
    int64_t sample_cap; /* 0 selects the default cap */
} wt_mc_settings;

typedef struct wt_estimate {
    double mean;
    double std_error;
    int64_t sample_count;
} wt_estimate;

typedef struct wt_simulation_result {
    wt_distortion_point point;
    wt_estimate distortion;
    wt_estimate input_power;
    wt_estimate orthogonality;
    wt_estimate leakage_bits;
    double analytic_distortion;
} wt_simulation_result;

typedef struct wt_gap_result {
    double ideal_distortion;
    double realized_distortion;
    double gap_ratio;
    double rate_matched_ideal_distortion;
    double rate_matched_ratio;
    double realized_std_error;
} wt_gap_result;

typedef struct wt_exponent_row {
    wt_scheme scheme;
    double leakage_budget_bits;
    double slope;
    double window_start_db;
    double window_stop_db;
} wt_exponent_row;

typedef struct wt_system wt_system;
typedef struct wt_experiment wt_experiment;
typedef struct wt_codebook wt_codebook;
typedef struct wt_string wt_string;

WT_API const char* wt_last_error(void);
WT_API const char* wt_status_name(wt_status status);
WT_API const char* wt_scheme_name(wt_scheme scheme);
WT_API wt_status wt_scheme_from_name(const char* name, wt_scheme* out);

/* Strings returned by the library. */
WT_API const char* wt_string_data(const wt_string* s);
WT_API size_t wt_string_size(const wt_string* s);
WT_API void wt_string_destroy(wt_string* s);

/* Problem instance. Creation validates; WT_ERR_VALIDATION lists every violation. */
WT_API wt_status wt_system_create(const wt_system_params* params, wt_system** out);
WT_API void wt_system_destroy(wt_system* system);
WT_API wt_status wt_system_get_params(const wt_system* system, wt_system_params* out);

WT_API wt_status wt_capacity(double x, double* out_bits);
WT_API wt_status wt_snr_db_to_linear(double db, double* out);
WT_API wt_status wt_snr_linear_to_db(double lin, double* out);

/* Closed forms. */
WT_API wt_status wt_scheme_params_get(const wt_system* system, wt_scheme_params* out);
WT_API wt_status wt_analytic_distortion(const wt_system* system, wt_scheme scheme,
                                        double snr_a_db, wt_distortion_point* out);
WT_API wt_status wt_eavesdropper_floor(const wt_system* system, double* out);
WT_API wt_status wt_analytic_exponent(const wt_system* system, wt_scheme scheme,
                                      double start_db, double stop_db, int count,
                                      double* out_slope);

/* Monte Carlo (uncoded or hybrid). threads == 0 uses every hardware thread;
 * results do not depend on it. */
WT_API wt_status wt_simulate(const wt_system* system, wt_scheme scheme, double snr_a_db,
                             const wt_mc_settings* settings, unsigned threads,
                             wt_simulation_result* out);

/* Experiments (sweeps). */
WT_API wt_status wt_experiment_from_json(const char* json_text, wt_experiment** out);
WT_API wt_status wt_experiment_from_file(const char* path, wt_experiment** out);
WT_API wt_status wt_experiment_from_preset(const char* name, wt_experiment** out);
WT_API void wt_experiment_destroy(wt_experiment* experiment);
/* System of the spec; leakage_budget_bits is the spec's base budget. */
WT_API wt_status wt_experiment_get_system(const wt_experiment* experiment, wt_system_params* out);
/* Sorted leakage budgets swept by the experiment; *out_count receives the total. */
WT_API wt_status wt_experiment_budgets(const wt_experiment* experiment, double* out,
                                       size_t capacity, size_t* out_count);
/* Enables Monte Carlo rows (or replaces their settings). */
WT_API wt_status wt_experiment_set_montecarlo(wt_experiment* experiment,
                                              const wt_mc_settings* settings);
/* Non-zero when the experiment carries Monte Carlo settings; fills *out if so. */
WT_API int wt_experiment_get_montecarlo(const wt_experiment* experiment, wt_mc_settings* out);
WT_API wt_status wt_experiment_set_output_path(wt_experiment* experiment, const char* path);
/* Output path from the spec, or "" when none. Valid until the next mutation. */
WT_API const char* wt_experiment_output_path(const wt_experiment* experiment);
WT_API wt_status wt_experiment_to_json(const wt_experiment* experiment, wt_string** out);
/* Runs the sweep and returns the CSV document. */
WT_API wt_status wt_experiment_run_csv(const wt_experiment* experiment, int distortion_db,
                                       unsigned threads, wt_string** out_csv);
/* Runs the sweep and writes the CSV atomically (temporary file + rename). */
WT_API wt_status wt_experiment_run_to_file(const wt_experiment* experiment, const char* path,
                                           int distortion_db, unsigned threads);
/* Writes up to `capacity` rows; *out_count receives the total row count. */
WT_API wt_status wt_experiment_exponents(const wt_experiment* experiment, wt_exponent_row* rows,
                                         size_t capacity, size_t* out_count);

/* Lloyd-Max scalar quantizer. */
WT_API wt_status wt_codebook_train(const double* samples, size_t count, int num_levels,
                                   double tol, int max_iter, wt_codebook** out);
/* Trains on `count` Gaussian(0, variance) samples drawn from `seed`. */
WT_API wt_status wt_codebook_train_gaussian(double variance, size_t count, uint64_t seed,
                                            int num_levels, double tol, int max_iter,
                                            wt_codebook** out);
WT_API wt_status wt_codebook_from_json(const char* json_text, wt_codebook** out);
WT_API void wt_codebook_destroy(wt_codebook* codebook);
WT_API size_t wt_codebook_size(const wt_codebook* codebook);
WT_API wt_status wt_codebook_levels(const wt_codebook* codebook, double* out, size_t capacity);
WT_API wt_status wt_codebook_distortion(const wt_codebook* codebook, double* out);
WT_API wt_status wt_codebook_quantize(const wt_codebook* codebook, double x, size_t* out_index,
                                      double* out_reconstruction);
WT_API wt_status wt_codebook_to_json(const wt_codebook* codebook, wt_string** out);

WT_API wt_status wt_quantizer_gap(const wt_system* system, double snr_a_db, int num_levels,
                                  const wt_mc_settings* settings, unsigned threads,
                                  wt_gap_result* out);

#ifdef __cplusplus
}
#endif

#endif /* WIRETAP_WIRETAP_H */
