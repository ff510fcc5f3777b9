/* abe — annealed Bregman estimation of log normalization constants.
 *
 * C interface to the estimation core: diagonal-Gaussian proposals and
 * unnormalized targets, annealed estimators over geometric/arithmetic paths,
 * closed-form and quadrature theory predictions, and the experiment harness.
 *
 * Conventions:
 *   - every function returning abe_status reports ABE_OK (0) on success;
 *     on failure abe_last_error() describes the problem (thread-local)
 *   - handles are created and destroyed by matching create/destroy calls;
 *     destroy functions accept NULL
 *   - theory report fields use INFINITY for provably infinite divergences and
 *     NAN for values that are not computable in the given configuration
 */
#ifndef ABE_H
#define ABE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum abe_status {
    ABE_OK = 0,
    ABE_ERR_INVALID_ARGUMENT = 1,
    ABE_ERR_DIMENSION_MISMATCH = 2,
    ABE_ERR_DOMAIN = 3,
    ABE_ERR_UNSUPPORTED = 4,
    ABE_ERR_OPTIMIZATION = 5,
    ABE_ERR_NONFINITE = 6,
    ABE_ERR_CONFIG = 7,
    ABE_ERR_IO = 8,
    ABE_ERR_STEP_FAILURE = 9,
    ABE_ERR_UNKNOWN = 100
} abe_status;

const char* abe_version(void);
const char* abe_last_error(void);

/* ---- distributions ---- */

typedef struct abe_gaussian abe_gaussian; /* diagonal-covariance Gaussian */
typedef struct abe_target abe_target;     /* unnormalized Gaussian-shaped target */

abe_status abe_gaussian_create(size_t dim, const double* mean,
                               const double* var, abe_gaussian** out);
abe_status abe_gaussian_create_isotropic(size_t dim, double mean, double var,
                                         abe_gaussian** out);
void abe_gaussian_destroy(abe_gaussian* g);

abe_status abe_gaussian_log_density(const abe_gaussian* g, const double* x,
                                    size_t dim, double* out);
/* n i.i.d. draws into out (row-major n x dim); deterministic in the seed */
abe_status abe_gaussian_sample(const abe_gaussian* g, size_t n, uint64_t seed,
                               double* out);

/* f(x) = exp(<theta, t(x)>): the simply unnormalized model of the shape */
abe_status abe_target_simply_unnormalized(const abe_gaussian* shape,
                                          abe_target** out);
/* normalized density of the shape, so the true log Z is zero */
abe_status abe_target_normalized(const abe_gaussian* shape, abe_target** out);
/* multiply the target by exp(log_factor) */
abe_status abe_target_scale(abe_target* target, double log_factor);
abe_status abe_target_true_log_z(const abe_target* target, double* out);
abe_status abe_target_log_density(const abe_target* target, const double* x,
                                  size_t dim, double* out);
void abe_target_destroy(abe_target* target);

/* ---- estimation ---- */

typedef struct abe_options abe_options;
typedef struct abe_result abe_result;

/* defaults: estimator=geometric, loss=nce, k=9, n=10000, nu=1, seed=1 */
abe_status abe_options_create(abe_options** out);
void abe_options_destroy(abe_options* options);
/* none | geometric | arithmetic | two_step | two_step_trig */
abe_status abe_options_set_estimator(abe_options* options, const char* name);
/* is | revis | nce | is_revis */
abe_status abe_options_set_loss(abe_options* options, const char* name);
abe_status abe_options_set_k(abe_options* options, int k);
abe_status abe_options_set_n(abe_options* options, long n);
abe_status abe_options_set_nu(abe_options* options, double nu);
abe_status abe_options_set_seed(abe_options* options, uint64_t seed);
abe_status abe_options_set_two_step_split_budget(abe_options* options,
                                                 int enabled);

abe_status abe_estimate(const abe_gaussian* proposal, const abe_target* target,
                        const abe_options* options, abe_result** out);

double abe_result_log_z(const abe_result* result);
size_t abe_result_step_count(const abe_result* result);
double abe_result_step_beta(const abe_result* result, size_t step);
/* two-step runs record the stage-1 pre-estimate */
int abe_result_has_stage1(const abe_result* result);
double abe_result_stage1_log_z(const abe_result* result);
void abe_result_destroy(abe_result* result);

/* ---- theory ---- */

typedef struct abe_theory_report {
    double param_distance;
    double m_const; /* strong convexity over the parameter segment */
    double l_const; /* smoothness over the parameter segment */
    double d_chi2_fwd;
    double d_chi2_rev;
    double d_hellinger2;
    double d_harmonic;
    double epsilon; /* Bhattacharyya overlap, 1 - d_hellinger2 */
    double mse_binary_is;
    double mse_binary_revis;
    double mse_binary_nce;
    double mse_binary_is_revis;
    double fisher_rao_length; /* of the requested path */
    double mse_annealed_nce;  /* requested path, K steps */
    double alpha_h;
    double optimal_fisher_rao; /* 16 alpha_h^2 */
    double optimal_mse;        /* 16 alpha_h^2 / N */
    double binary_lower_bound;
    double geometric_upper_bound;
    double vanilla_lower_bound;
    double oracle_upper_bound;
} abe_theory_report;

/* path: geometric | arithmetic-vanilla | arithmetic-oracle |
 *       arithmetic-oracle-trig | optimal (oracle kinds use the true Z1) */
abe_status abe_theory(const abe_gaussian* proposal, const abe_target* target,
                      const char* path, int k, double n, double nu,
                      abe_theory_report* out);

/* ---- experiments ---- */

typedef struct abe_run_overrides {
    const char* experiment; /* NULL keeps the config's experiment */
    const char* out_path;   /* NULL keeps the config's out (default stdout) */
    int64_t seed;           /* negative keeps the config's seed */
    int jobs;               /* <= 0 keeps the config's jobs */
    int paper_scale;        /* nonzero switches to the full reference scale */
} abe_run_overrides;

/* config_path may be NULL when overrides name the experiment; the config file
 * is the flat key=value format described in the README */
abe_status abe_run_config_file(const char* config_path,
                               const abe_run_overrides* overrides);

/* same, additionally reporting whether the NCE loss had the smallest
 * empirical MSE in every summary group (1 when true or not applicable);
 * compare-losses exposes this as its exit status */
abe_status abe_run_config_file_checked(const char* config_path,
                                       const abe_run_overrides* overrides,
                                       int* nce_ordering_out);

abe_status abe_plot(const char* csv_path, const char* svg_path);

#ifdef __cplusplus
}
#endif

#endif /* ABE_H */
