/* C interface to the dragonnet shared library.
 *
 * All functions return drg_status; on failure drg_last_error() holds a
 * human-readable message for the calling thread. Handles are opaque and
 * must be released with the matching *_free function.
 */
#ifndef DRAGONNET_C_H
#define DRAGONNET_C_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum drg_status {
    DRG_OK = 0,
    DRG_ERR_VALIDATION = 1,
    DRG_ERR_SHAPE = 2,
    DRG_ERR_GROUP_TOO_SMALL = 3,
    DRG_ERR_DIVERGENCE = 4,
    DRG_ERR_PARSE = 5,
    DRG_ERR_IO = 6,
    DRG_ERR_CONTRACT = 7,
    DRG_ERR_UNKNOWN = 8
} drg_status;

typedef enum drg_variant {
    DRG_VARIANT_MODIFIED = 0,
    DRG_VARIANT_BASELINE = 1
} drg_variant;

typedef enum drg_metric {
    DRG_METRIC_MANHATTAN = 0,
    DRG_METRIC_EUCLIDEAN = 1,
    DRG_METRIC_CHEBYSHEV = 2
} drg_metric;

typedef struct drg_dataset drg_dataset;
typedef struct drg_model drg_model;

/* Message for the most recent failure on this thread; empty string if none. */
const char* drg_last_error(void);

/* ---- datasets ---------------------------------------------------------- */

/* Headerless realization CSV: t, y_factual, y_cfactual, mu0, mu1, x1..xd */
drg_status drg_dataset_load_csv(const char* path, drg_dataset** out);
drg_status drg_dataset_save_csv(const drg_dataset* ds, const char* path);

typedef struct drg_synthetic_spec {
    int64_t n;
    int64_t d;
    double confounding_strength;
    double ate_target;
    double noise_sd;
    uint64_t seed;
} drg_synthetic_spec;

void drg_synthetic_spec_init(drg_synthetic_spec* spec);
drg_status drg_dataset_generate(const drg_synthetic_spec* spec, drg_dataset** out);

int64_t drg_dataset_num_samples(const drg_dataset* ds);
int64_t drg_dataset_num_features(const drg_dataset* ds);
int64_t drg_dataset_num_treated(const drg_dataset* ds);
int drg_dataset_has_ground_truth(const drg_dataset* ds);
drg_status drg_dataset_true_ate(const drg_dataset* ds, double* out);

/* Stratified test carve-out; the train part keeps everything else. */
drg_status drg_dataset_split_off_test(const drg_dataset* ds, double test_fraction,
                                      uint64_t seed, drg_dataset** train_out,
                                      drg_dataset** test_out);
void drg_dataset_free(drg_dataset* ds);

/* ---- training & evaluation -------------------------------------------- */

typedef struct drg_train_options {
    drg_variant variant;
    drg_metric metric;
    int k;
    double alpha;
    double beta;
    double validation_fraction;
    int epochs;
    int batch_size;
    int patience;
    double learning_rate;
    double momentum;
    uint64_t seed;
    int standardize_covariates;
    int64_t rep_width;
    int rep_depth;
    int64_t head_width;
    int head_depth;
    double head_l2;
} drg_train_options;

/* Fills in the default settings (k=10, alpha=1, beta=1, Euclidean,
 * 20% validation, SGD momentum 0.9 at learning rate 1e-5). */
void drg_train_options_init(drg_train_options* opts);

drg_status drg_train(const drg_dataset* data, const drg_train_options* opts,
                     drg_model** out);

typedef struct drg_metrics {
    double eps_ate;
    double eps_pehe;       /* mean of squares, no root */
    double eps_pehe_root;
    double psi_hat;
} drg_metrics;

/* Evaluates against a dataset carrying ground-truth surfaces. Pass
 * self_exclusion nonzero only when the queries are exactly the model's own
 * training rows. */
drg_status drg_model_evaluate(const drg_model* model, const drg_dataset* queries,
                              int self_exclusion, drg_metrics* out);

drg_status drg_model_save(const drg_model* model, const char* path);
drg_status drg_model_load(const char* path, drg_model** out);
double drg_model_epsilon(const drg_model* model);
void drg_model_free(drg_model* model);

/* ---- benchmark statistics ---------------------------------------------- */
/* `values` is row-major, n_problems x n_models, lower is better. */

drg_status drg_performance_profile(const double* values, int64_t n_problems,
                                   int64_t n_models, const double* taus,
                                   int64_t n_taus,
                                   double* rho_out /* n_taus*n_models, row-major */);

drg_status drg_far_test(const double* values, int64_t n_problems, int64_t n_models,
                        double* far_statistic, int64_t* best_index,
                        double* avg_ranks /* n_models */,
                        double* pvalues /* n_models, NaN at control */,
                        double* finner_adjusted /* n_models, NaN at control */,
                        int* decisions /* n_models: 1 reject, 0 fail, -1 control */);

drg_status drg_finner_adjust(const double* ascending_pvalues, int64_t m,
                             int k_comparisons, double* adjusted_out);

#ifdef __cplusplus
}
#endif

#endif /* DRAGONNET_C_H */
