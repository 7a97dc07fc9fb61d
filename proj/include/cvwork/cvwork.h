/* C interface to libcvwork: Gaussian two-mode states, measurement-induced
 * work, quantum-illumination SNR, QKD correlations and the sweep engine.
 *
 * All functions return a cvw_status. On failure the message is available from
 * cvw_last_error() until the next call on the same thread. Handles are opaque
 * and owned by the caller; release them with the matching *_free function.
 * Quadrature ordering is (x1, p1, x2, p2), vacuum variance 1/2. */
#ifndef CVWORK_CVWORK_H
#define CVWORK_CVWORK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CVWORK_BUILDING_LIBRARY)
#    define CVW_API __declspec(dllexport)
#  else
#    define CVW_API __declspec(dllimport)
#  endif
#else
#  define CVW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cvw_status {
  CVW_OK = 0,
  CVW_ERR_NULL = 1,        /* required pointer argument was NULL */
  CVW_ERR_VALIDATION = 2,  /* CM not symmetric or not positive definite */
  CVW_ERR_UNPHYSICAL = 3,  /* symplectic eigenvalue below 1/2 */
  CVW_ERR_DOMAIN = 4,
  CVW_ERR_DIMENSION = 5,
  CVW_ERR_NUMERIC = 6,
  CVW_ERR_USAGE = 7,
  CVW_ERR_IO = 8,
  CVW_ERR_INTERNAL = 9
} cvw_status;

typedef enum cvw_measurement {
  CVW_HOMODYNE_X = 0,
  CVW_HOMODYNE_P = 1,
  CVW_HETERODYNE = 2,
  CVW_GENERAL = 3 /* uses the lambda argument */
} cvw_measurement;

typedef enum cvw_mode { CVW_IDLER = 0, CVW_SIGNAL = 1 } cvw_mode;

typedef enum cvw_report { CVW_REPORT_SWEEP = 0, CVW_REPORT_COMPARE = 1 } cvw_report;

typedef struct cvw_state cvw_state;
typedef struct cvw_sweep cvw_sweep;

typedef struct cvw_validation {
  int passed;
  int symmetric;
  int positive_definite;
  int symplectic_bound;
  double symmetry_margin;    /* worst relative asymmetry */
  double min_eigenvalue;
  double symplectic_margin;  /* nu_min - 1/2 */
} cvw_validation;

typedef struct cvw_work_result {
  double work_per_kbt;
  double entropy_before;
  double entropy_after;
  double conditional_cov[4]; /* row-major 2x2 */
} cvw_work_result;

typedef struct cvw_snr_result {
  double signal_gap;
  double noise_h1;
  double noise_h0;
  double snr;
} cvw_snr_result;

typedef struct cvw_correlation {
  double rho;
  double numerator;
  double var_i;
  double var_r;
} cvw_correlation;

CVW_API const char* cvw_version(void);
CVW_API const char* cvw_last_error(void);
CVW_API const char* cvw_status_name(cvw_status status);

/* States */
CVW_API cvw_status cvw_state_from_cov(const double* cov, size_t n_modes, const double* mean, cvw_state** out);
CVW_API cvw_status cvw_state_thermal(double n, cvw_state** out);
CVW_API cvw_status cvw_state_tmsts(double r, double n_th, cvw_state** out);
CVW_API cvw_status cvw_state_apply_channel(const cvw_state* s, double eta, double n_ch, cvw_state** out);
CVW_API cvw_status cvw_state_qi_null(const cvw_state* source, double n_ch, cvw_state** out);
CVW_API void cvw_state_free(cvw_state* s);
CVW_API size_t cvw_state_modes(const cvw_state* s);
/* Copies the 2N x 2N CM row-major into out (len >= 4 N^2). */
CVW_API cvw_status cvw_state_cov(const cvw_state* s, double* out, size_t len);
CVW_API cvw_status cvw_state_mean(const cvw_state* s, double* out, size_t len);

CVW_API cvw_status cvw_occupation_from_temperature(double frequency_hz, double temperature_k, double* out);

/* Symplectic analysis */
CVW_API cvw_status cvw_symplectic_eigenvalues(const cvw_state* s, double* out, size_t len);
CVW_API cvw_status cvw_ppt_smallest_eigenvalue(const cvw_state* s, double* out);
CVW_API cvw_status cvw_entropy(const cvw_state* s, double* out);
/* Never fails on an unphysical state; the report says why. */
CVW_API cvw_status cvw_validate(const cvw_state* s, cvw_validation* out);

/* Conditioning and work. `measured` selects the measured mode of a two-mode state. */
CVW_API cvw_status cvw_extracted_work(const cvw_state* s, cvw_mode measured, cvw_measurement kind, double lambda,
                                      cvw_work_result* out);
CVW_API cvw_status cvw_feedback_displacement(const cvw_state* s, cvw_mode measured, cvw_measurement kind,
                                             double lambda, const double* outcome, size_t outcome_len,
                                             double prefactor, double out[2]);
CVW_API cvw_status cvw_work_after_channel(double r, double n_th, double eta, double n_ch, double* x,
                                          double* work_per_kbt);

/* Protocols */
CVW_API cvw_status cvw_qi_snr(const cvw_state* h1, const cvw_state* h0, cvw_snr_result* out);
CVW_API cvw_status cvw_qkd_rho(const cvw_state* s, cvw_correlation* out);

/* Sweep engine. Settings use the CLI names: r, n_th, n_ch, eta, measurement,
 * sweep, quantities, oracle, out, no_timestamp. Later settings win. */
CVW_API cvw_status cvw_sweep_create(cvw_sweep** out);
CVW_API void cvw_sweep_free(cvw_sweep* sw);
CVW_API cvw_status cvw_sweep_set(cvw_sweep* sw, const char* key, const char* value);
CVW_API cvw_status cvw_sweep_load_file(cvw_sweep* sw, const char* path);
/* Runs the report and writes CSV to the configured `out` ("-" = stdout).
 * n_rows / n_failed may be NULL. */
CVW_API cvw_status cvw_sweep_write(const cvw_sweep* sw, cvw_report kind, size_t* n_rows, size_t* n_failed);
/* Same, into a caller buffer. *needed receives the size including the NUL;
 * returns CVW_ERR_DIMENSION (with *needed set) when the buffer is too small. */
CVW_API cvw_status cvw_sweep_render(const cvw_sweep* sw, cvw_report kind, char* buf, size_t len, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif /* CVWORK_CVWORK_H */
