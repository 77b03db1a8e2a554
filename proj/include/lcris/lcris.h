/* SPDX-License-Identifier: Apache-2.0 */
/* lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers */

#ifndef LCRIS_LCRIS_H
#define LCRIS_LCRIS_H

#include <stddef.h>
#include <stdint.h>

#if defined(LCRIS_BUILDING_LIBRARY)
#define LCRIS_API __attribute__((visibility("default")))
#else
#define LCRIS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum lcris_status {
  LCRIS_OK = 0,
  LCRIS_ERR_CONFIG = 2,
  LCRIS_ERR_DATA = 3,
  LCRIS_ERR_NUMERIC = 4
} lcris_status;

typedef struct lcris_scenario lcris_scenario;
typedef struct lcris_layout lcris_layout;

typedef struct lcris_run_options {
  unsigned threads;        /* 0 -> 1 */
  uint64_t seed;
  int seed_set;            /* nonzero: `seed` overrides the scenario seed */
  size_t trials;           /* tolerance-mc only, 0 -> 10 */
  int elementwise;         /* -1 scenario default, 0 columns, 1 elements */
  int optimize_trials;     /* tolerance-mc: run the optimizer per trial */
  const char* out_dir;     /* NULL -> scenario output_dir */
  const char* traces_path; /* reduce only */
} lcris_run_options;

/* Message of the last failing call on this thread; never NULL. */
LCRIS_API const char* lcris_last_error(void);
LCRIS_API const char* lcris_version(void);
LCRIS_API void lcris_run_options_init(lcris_run_options* options);

LCRIS_API lcris_status lcris_scenario_load(const char* path, lcris_scenario** out);
LCRIS_API lcris_status lcris_scenario_parse(const char* json_text, lcris_scenario** out);
LCRIS_API void lcris_scenario_free(lcris_scenario* scenario);

/* Commands. On success *summary (may be NULL) receives a key: value text
 * that must be released with lcris_string_free. */
LCRIS_API lcris_status lcris_run_steer(const lcris_scenario* s, const lcris_run_options* o, char** summary);
LCRIS_API lcris_status lcris_run_sweep(const lcris_scenario* s, const lcris_run_options* o, char** summary);
LCRIS_API lcris_status lcris_run_tolerance_mc(const lcris_scenario* s, const lcris_run_options* o, char** summary);
LCRIS_API lcris_status lcris_run_optimize(const lcris_scenario* s, const lcris_run_options* o, char** summary);
LCRIS_API lcris_status lcris_run_reduce(const lcris_scenario* s, const lcris_run_options* o, char** summary);
LCRIS_API lcris_status lcris_run_report(const lcris_scenario* s, const lcris_run_options* o, char** summary);
LCRIS_API void lcris_string_free(char* text);

/* Closed forms with default material data. */
LCRIS_API lcris_status lcris_lc_permittivity(double v_bias, double* eps_r, double* tan_delta);
LCRIS_API lcris_status lcris_metal_plate_rcs(double area_m2, double theta_tx_deg, double theta_rx_deg,
                                             double phi_tx_deg, double phi_rx_deg, double freq_hz,
                                             double* rcs_m2);
LCRIS_API lcris_status lcris_figure_of_merit(double dphi_max_deg, double il_max_db, double* fom);
LCRIS_API lcris_status lcris_compactness(double dphi_max_deg, double l_phys_m, double freq_hz, double* value);
LCRIS_API lcris_status lcris_response_times(double t_lc_m, double* tau_on_s, double* tau_off_s);
LCRIS_API lcris_status lcris_array_power(double p_element_w, long long n_elements, double* p_total_w);

/* grid: 0 rectangular, 1 triangular */
LCRIS_API lcris_status lcris_layout_build(size_t rows, size_t cols, double dx_m, double dy_m, int grid,
                                          lcris_layout** out);
LCRIS_API size_t lcris_layout_size(const lcris_layout* layout);
LCRIS_API lcris_status lcris_layout_position(const lcris_layout* layout, size_t index, double* x_m, double* y_m);
LCRIS_API double lcris_layout_area(const lcris_layout* layout);
LCRIS_API void lcris_layout_free(lcris_layout* layout);

#ifdef __cplusplus
}
#endif

#endif
