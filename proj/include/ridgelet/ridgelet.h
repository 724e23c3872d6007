/* C interface to the ridgelet library.
 *
 * Every function returning rdg_status leaves a message retrievable with
 * rdg_last_error_message() (per thread) when it fails. Handles are opaque and
 * released with the matching *_free function; NULL is accepted by all *_free.
 */
#ifndef RIDGELET_RIDGELET_H
#define RIDGELET_RIDGELET_H

#include <stddef.h>
#include <stdint.h>

#if defined(RIDGELET_BUILDING_LIBRARY)
#define RDG_API __attribute__((visibility("default")))
#else
#define RDG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rdg_status {
  RDG_OK = 0,
  RDG_INVALID_ARGUMENT = 1,
  RDG_ALIASING = 2,
  RDG_NOT_ADMISSIBLE = 3,
  RDG_NUMERIC = 4,
  RDG_DIVERGED = 5,
  RDG_IO = 6,
  RDG_INTERNAL = 7
} rdg_status;

typedef struct rdg_activation rdg_activation;
typedef struct rdg_dataset rdg_dataset;
typedef struct rdg_spectrum rdg_spectrum;
typedef struct rdg_solution rdg_solution;
typedef struct rdg_cloud rdg_cloud;
typedef struct rdg_sweep rdg_sweep;

/* Midpoint grid over [-A, A]^dim x [-T/2, T/2). */
typedef struct rdg_grid {
  int dim;
  double A;
  double T;
  int na;
  int nb;
} rdg_grid;

RDG_API const char* rdg_version(void);
RDG_API const char* rdg_last_error_message(void);
RDG_API const char* rdg_status_string(rdg_status status);
RDG_API void rdg_string_free(char* s);

/* ---- activations ---------------------------------------------------- */

/* kind: periodic-relu | periodic-tanh | periodic-gaussian | sine | cosine */
RDG_API rdg_status rdg_activation_create(const char* kind, double T, double k, double offset, double amplitude,
                                         rdg_activation** out);
/* {kind, T, k?, offset?, amplitude?, values?}; a missing kind or T fails. */
RDG_API rdg_status rdg_activation_from_json(const char* json, rdg_activation** out);
RDG_API rdg_status rdg_activation_to_json(const rdg_activation* act, char** out);
RDG_API void rdg_activation_free(rdg_activation* act);
RDG_API double rdg_activation_eval(const rdg_activation* act, double t);
RDG_API rdg_status rdg_activation_normalize(const rdg_activation* act, int m, int n_max, int q, rdg_activation** out);
RDG_API rdg_status rdg_activation_normalize_against(const rdg_activation* rho, const rdg_activation* sigma, int m,
                                                   int n_max, int q, rdg_activation** out);

typedef struct rdg_admissibility {
  double dc_re;
  double dc_im;
  double sum;
  double tail_bound;
  int admissible;
} rdg_admissibility;

RDG_API rdg_status rdg_admissibility_check(const rdg_activation* act, int m, int n_max, int q,
                                           rdg_admissibility* out);

typedef enum rdg_pair_verdict { RDG_PAIR_ADMISSIBLE = 0, RDG_PAIR_DEGENERATE = 1, RDG_PAIR_NOT_NORMALIZED = 2 } rdg_pair_verdict;

typedef struct rdg_pair_report {
  double re;
  double im;
  double dc_re;
  double dc_im;
  rdg_pair_verdict verdict;
} rdg_pair_report;

RDG_API rdg_status rdg_pair_check(const rdg_activation* rho, const rdg_activation* sigma, int m, int n_max, int q,
                                  rdg_pair_report* out);
RDG_API const char* rdg_pair_verdict_string(rdg_pair_verdict verdict);
/* CSV "n,re,im" */
RDG_API rdg_status rdg_activation_write_coefficients(const rdg_activation* act, int n_max, int q, const char* path);

/* ---- datasets ------------------------------------------------------- */

typedef struct rdg_dataset_spec {
  const char* tag;      /* sin2pi | gaussian-bump | square-wave | topologist-sine */
  size_t n;             /* 0 selects the tag's default */
  uint64_t seed;
  double mu;            /* gaussian-bump centre */
  const char* sampling; /* iid | stratified | midpoint; NULL means iid */
  double lo;
  double hi;
} rdg_dataset_spec;

RDG_API void rdg_dataset_spec_default(rdg_dataset_spec* spec);
RDG_API rdg_status rdg_dataset_generate(const rdg_dataset_spec* spec, rdg_dataset** out);
/* Uniform density on [lo, hi]^dim; x is row-major n x dim. */
RDG_API rdg_status rdg_dataset_from_arrays(int dim, size_t n, const double* x, const double* y, double lo, double hi,
                                           rdg_dataset** out);
RDG_API rdg_status rdg_dataset_load_csv(const char* path, double lo, double hi, rdg_dataset** out);
RDG_API rdg_status rdg_dataset_write_csv(const rdg_dataset* data, const char* path);
RDG_API size_t rdg_dataset_size(const rdg_dataset* data);
RDG_API int rdg_dataset_dim(const rdg_dataset* data);
RDG_API void rdg_dataset_free(rdg_dataset* data);
/* Value of a generator tag's target function at x. */
RDG_API rdg_status rdg_generator_eval(const char* tag, double x, double mu, double* out);

/* ---- spectra -------------------------------------------------------- */

RDG_API rdg_status rdg_spectrum_compute(const rdg_dataset* data, const rdg_activation* rho, const rdg_grid* grid,
                                        int threads, rdg_spectrum** out);
/* R[p f / (beta + p)] */
RDG_API rdg_status rdg_spectrum_theoretical(const rdg_dataset* data, const rdg_activation* act, double beta,
                                            const rdg_grid* grid, int threads, rdg_spectrum** out);
RDG_API rdg_status rdg_spectrum_load_csv(const char* path, const rdg_grid* grid, rdg_spectrum** out);
RDG_API rdg_status rdg_spectrum_write_csv(const rdg_spectrum* s, const char* path);
RDG_API rdg_status rdg_spectrum_write_ppm(const rdg_spectrum* s, const char* path);
/* JSON {A, T, m, na, nb} */
RDG_API rdg_status rdg_spectrum_write_sidecar(const rdg_spectrum* s, const char* path);
RDG_API rdg_status rdg_grid_from_sidecar(const char* path, rdg_grid* out);
RDG_API rdg_status rdg_spectrum_values(const rdg_spectrum* s, const double** values, size_t* count);
RDG_API rdg_status rdg_spectrum_get_grid(const rdg_spectrum* s, rdg_grid* out);
RDG_API void rdg_spectrum_free(rdg_spectrum* s);

/* S[gamma] at count query points xs (row-major count x dim). */
RDG_API rdg_status rdg_spectrum_apply(const rdg_spectrum* s, const rdg_activation* sigma, const double* xs,
                                      size_t count, int threads, double* out);
/* S_sigma[R_rho[f]] at xs; pairing may be NULL. */
RDG_API rdg_status rdg_reconstruct(const rdg_dataset* data, const rdg_activation* rho, const rdg_activation* sigma,
                                   const rdg_grid* grid, const double* xs, size_t count, int threads, double* out,
                                   rdg_pair_report* pairing);

/* ---- ridge problems ------------------------------------------------- */

typedef enum rdg_hidden { RDG_HIDDEN_GRID = 0, RDG_HIDDEN_ATOMS = 1 } rdg_hidden;

typedef struct rdg_solve_spec {
  double beta;
  rdg_hidden hidden;
  rdg_grid grid;     /* grid problems; atoms use grid.A, grid.T and grid.dim */
  size_t atoms;      /* atom count d, drawn uniformly from seed */
  int beta_schedule; /* beta_d = beta (1 + 1/d) */
  uint64_t seed;
  int threads;
} rdg_solve_spec;

typedef struct rdg_solve_summary {
  double J;
  double fit;
  double penalty;
  double delta_A_norm;
  double condition;
  double normal_residual;
  double beta;
  double A;
  int dual;
} rdg_solve_summary;

RDG_API rdg_status rdg_solve(const rdg_dataset* data, const rdg_activation* act, const rdg_solve_spec* spec,
                             rdg_solution** out);
RDG_API rdg_status rdg_solution_summary(const rdg_solution* sol, rdg_solve_summary* out);
RDG_API rdg_status rdg_solution_coefficients(const rdg_solution* sol, const double** values, size_t* count);
/* Grid solutions as spectrum CSV "a,b,value", atomic ones as "a,b,c". */
RDG_API rdg_status rdg_solution_write_csv(const rdg_solution* sol, const char* path);
/* JSON {J, fit, penalty, delta_A_norm, beta, A, ...} */
RDG_API rdg_status rdg_solution_write_report(const rdg_solution* sol, const char* path);
RDG_API void rdg_solution_free(rdg_solution* sol);

/* ---- training ------------------------------------------------------- */

typedef struct rdg_train_config {
  double eta;
  double beta;
  size_t batch;
  size_t epochs;
  size_t ensemble;
  size_t units;
  double init_lo;
  double init_hi;
  uint64_t seed;
  int freeze_hidden;
  int decay_outer_only; /* decay c only, clip a to [-clip_A, clip_A], wrap b */
  double clip_A;
  int threads;
} rdg_train_config;

RDG_API void rdg_train_config_default(rdg_train_config* cfg);
RDG_API rdg_status rdg_train(const rdg_dataset* data, const rdg_activation* act, const rdg_train_config* cfg,
                             rdg_cloud** out);
RDG_API size_t rdg_cloud_size(const rdg_cloud* cloud);
/* Per-replica final losses (NaN for excluded replicas). */
RDG_API rdg_status rdg_cloud_losses(const rdg_cloud* cloud, const double** losses, size_t* count);
RDG_API rdg_status rdg_cloud_excluded(const rdg_cloud* cloud, const size_t** replicas, size_t* count);
RDG_API rdg_status rdg_cloud_load_csv(const char* path, double T, rdg_cloud** out);
RDG_API rdg_status rdg_cloud_write_csv(const rdg_cloud* cloud, const char* path);
RDG_API void rdg_cloud_free(rdg_cloud* cloud);

/* ---- analysis ------------------------------------------------------- */

typedef struct rdg_comparison {
  double similarity;
  double sign_agreement;
  size_t compared_cells;
  size_t out_of_bounds;
} rdg_comparison;

RDG_API rdg_status rdg_compare(const rdg_cloud* cloud, const rdg_spectrum* spectrum, rdg_comparison* out);

typedef struct rdg_sweep_spec {
  const size_t* ds;
  size_t n_ds;
  size_t trials;
  const char* const* tests; /* "one", "a", "cos_b" */
  size_t n_tests;
} rdg_sweep_spec;

/* reference must describe a grid problem. */
RDG_API rdg_status rdg_sweep_run(const rdg_dataset* data, const rdg_activation* act, const rdg_solve_spec* reference,
                                 const rdg_sweep_spec* spec, rdg_sweep** out);
RDG_API rdg_status rdg_sweep_median(const rdg_sweep* sweep, size_t d_index, size_t test_index, double* out);
/* CSV "d,h,trial,error" */
RDG_API rdg_status rdg_sweep_write_csv(const rdg_sweep* sweep, const char* path);
RDG_API rdg_status rdg_sweep_write_report(const rdg_sweep* sweep, const char* path);
RDG_API void rdg_sweep_free(rdg_sweep* sweep);

#ifdef __cplusplus
}
#endif

#endif
