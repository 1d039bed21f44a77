/* torusnf — Birkhoff normal forms near Diophantine Kronecker tori.
 *
 * C interface to the shared library.  All functions return tnf_status;
 * on any nonzero status tnf_last_error() carries a message (thread-local).
 * Handles are opaque and must be released with the matching _free call.
 */

#ifndef TORUSNF_H
#define TORUSNF_H

#include <stddef.h>

#if defined _WIN32
#define TNF_API __declspec(dllexport)
#else
#define TNF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct tnf_problem tnf_problem;
typedef struct tnf_result tnf_result;
typedef struct tnf_series tnf_series;

typedef enum tnf_status {
    TNF_OK = 0,
    TNF_ERR = 1,          /* internal / unexpected */
    TNF_ERR_SCHEMA = 2,   /* bad input file, schema violation, bad argument */
    TNF_ERR_RESONANT = 3, /* frequency resonant within the verified horizon */
    TNF_ERR_VERIFY = 4,   /* verification gate failed (flatness slope) */
    TNF_ERR_NOCONV = 5    /* iteration did not converge */
} tnf_status;

TNF_API const char* tnf_version(void);
TNF_API const char* tnf_last_error(void);

/* ---- problems ------------------------------------------------------- */

TNF_API tnf_status tnf_problem_load(const char* path, tnf_problem** out);
TNF_API tnf_status tnf_problem_parse(const char* json_text, tnf_problem** out);
TNF_API void tnf_problem_free(tnf_problem* p);
TNF_API int tnf_problem_dim(const tnf_problem* p);
/* empirical Diophantine constant of the problem frequency */
TNF_API tnf_status tnf_problem_kappa(const tnf_problem* p, double* kappa_out);

/* ---- normal form computation ---------------------------------------- */

typedef struct tnf_compute_opts {
    int order;           /* <= 0: order_M from the problem file */
    int retain_b;        /* -1 auto (on for order <= 8), 0 off, 1 on */
    long seed;           /* < 0: seed from the problem file */
    int kmax_per_order;  /* <= 0: problem/default */
} tnf_compute_opts;

TNF_API void tnf_compute_opts_init(tnf_compute_opts* opts);

TNF_API tnf_status tnf_compute(const tnf_problem* p, const tnf_compute_opts* opts,
                               tnf_result** out);
TNF_API void tnf_result_free(tnf_result* r);

TNF_API int tnf_result_order(const tnf_result* r);
TNF_API int tnf_result_dim(const tnf_result* r);
/* R_m coefficient of I^alpha (alpha has dim entries) */
TNF_API tnf_status tnf_result_normal_form_coeff(const tnf_result* r, int m, const int* alpha,
                                                double* out);
TNF_API tnf_status tnf_result_save(const tnf_result* r, const char* json_path);
TNF_API tnf_status tnf_result_load(const char* json_path, tnf_result** out);

/* ---- pipeline drivers (write the same artifacts as the CLI) ---------- */

TNF_API tnf_status tnf_cmd_compute(const char* problem_path, const char* out_dir, int order,
                                   long seed, int retain_b, char* summary, size_t summary_cap,
                                   int* exit_code);
TNF_API tnf_status tnf_cmd_diagnose(const char* result_path, const char* out_dir,
                                    const double* s_grid, int n_s, char* summary,
                                    size_t summary_cap, int* exit_code);
TNF_API tnf_status tnf_cmd_verify(const char* problem_path, const char* result_path,
                                  const char* out_dir, const double* radii, int n_radii,
                                  int samples, const double* escape_r0, int n_escape,
                                  double band, double horizon, double dt, long seed,
                                  int skip_escape, char* summary, size_t summary_cap,
                                  int* exit_code);
TNF_API tnf_status tnf_cmd_checks(const char* suite, unsigned seed, const char* out_path,
                                  char* summary, size_t summary_cap, int* exit_code);

/* ---- Fourier series utilities ---------------------------------------- */

TNF_API tnf_status tnf_series_parse(const char* json_text, tnf_series** out);
TNF_API void tnf_series_free(tnf_series* s);
TNF_API tnf_status tnf_series_wiener_norm(const tnf_series* s, double smoothness, double* out);
/* u solving <omega, du/dtheta> = f with zero mean */
TNF_API tnf_status tnf_series_solve_homological(const tnf_series* f, const double* omega,
                                                int dim, double tau, int horizon,
                                                tnf_series** out);
TNF_API tnf_status tnf_series_to_json(const tnf_series* s, char* buffer, size_t cap);

/* min over 0 < |k| <= horizon of |<omega,k>| |k|^tau */
TNF_API tnf_status tnf_empirical_kappa(const double* omega, int dim, double tau, int horizon,
                                       double* out);

#ifdef __cplusplus
}
#endif

#endif /* TORUSNF_H */
