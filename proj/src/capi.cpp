#include "dragonnet/dragonnet_c.h"

#include <cstring>
#include <string>

#include "dragonnet/benchstats.hpp"
#include "dragonnet/data.hpp"
#include "dragonnet/errors.hpp"
#include "dragonnet/estimation.hpp"
#include "dragonnet/model.hpp"

using namespace dragonnet;

struct drg_dataset {
    Dataset ds;
};

struct drg_model {
    DragonnetModel model;
};

namespace {

thread_local std::string g_last_error;

drg_status fail(drg_status code, const char* msg) {
    g_last_error = msg;
    return code;
}

// runs fn, mapping exceptions onto status codes
template <typename Fn>
drg_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return DRG_OK;
    } catch (const GroupTooSmallError& e) {
        return fail(DRG_ERR_GROUP_TOO_SMALL, e.what());
    } catch (const DivergenceError& e) {
        return fail(DRG_ERR_DIVERGENCE, e.what());
    } catch (const ParseError& e) {
        return fail(DRG_ERR_PARSE, e.what());
    } catch (const ShapeError& e) {
        return fail(DRG_ERR_SHAPE, e.what());
    } catch (const IoError& e) {
        return fail(DRG_ERR_IO, e.what());
    } catch (const ValidationError& e) {
        return fail(DRG_ERR_VALIDATION, e.what());
    } catch (const ContractError& e) {
        return fail(DRG_ERR_CONTRACT, e.what());
    } catch (const std::exception& e) {
        return fail(DRG_ERR_UNKNOWN, e.what());
    } catch (...) {
        return fail(DRG_ERR_UNKNOWN, "unknown error");
    }
}

DistanceMetric to_metric(drg_metric m) {
    switch (m) {
        case DRG_METRIC_MANHATTAN: return DistanceMetric::Manhattan;
        case DRG_METRIC_CHEBYSHEV: return DistanceMetric::Chebyshev;
        default: return DistanceMetric::Euclidean;
    }
}

}  // namespace

extern "C" {

const char* drg_last_error(void) { return g_last_error.c_str(); }

drg_status drg_dataset_load_csv(const char* path, drg_dataset** out) {
    if (!path || !out) return fail(DRG_ERR_VALIDATION, "null argument");
    return guarded([&] { *out = new drg_dataset{load_ihdp_csv(path)}; });
}

drg_status drg_dataset_save_csv(const drg_dataset* ds, const char* path) {
    if (!ds || !path) return fail(DRG_ERR_VALIDATION, "null argument");
    return guarded([&] { save_realization_csv(ds->ds, path); });
}

void drg_synthetic_spec_init(drg_synthetic_spec* spec) {
    if (!spec) return;
    spec->n = 1000;
    spec->d = 5;
    spec->confounding_strength = 1.0;
    spec->ate_target = 1.0;
    spec->noise_sd = 1.0;
    spec->seed = 0;
}

drg_status drg_dataset_generate(const drg_synthetic_spec* spec, drg_dataset** out) {
    if (!spec || !out) return fail(DRG_ERR_VALIDATION, "null argument");
    return guarded([&] {
        SyntheticSpec s;
        s.n = spec->n;
        s.d = spec->d;
        s.confounding_strength = spec->confounding_strength;
        s.ate_target = spec->ate_target;
        s.noise_sd = spec->noise_sd;
        s.seed = spec->seed;
        *out = new drg_dataset{generate_synthetic(s)};
    });
}

int64_t drg_dataset_num_samples(const drg_dataset* ds) { return ds ? ds->ds.n() : 0; }
int64_t drg_dataset_num_features(const drg_dataset* ds) { return ds ? ds->ds.d() : 0; }
int64_t drg_dataset_num_treated(const drg_dataset* ds) {
    return ds ? ds->ds.count_treated() : 0;
}
int drg_dataset_has_ground_truth(const drg_dataset* ds) {
    return ds && ds->ds.has_ground_truth() ? 1 : 0;
}

drg_status drg_dataset_true_ate(const drg_dataset* ds, double* out) {
    if (!ds || !out) return fail(DRG_ERR_VALIDATION, "null argument");
    return guarded([&] {
        if (!ds->ds.has_ground_truth())
            throw ValidationError("dataset has no ground-truth surfaces");
        *out = (*ds->ds.mu1 - *ds->ds.mu0).mean();
    });
}

drg_status drg_dataset_split_off_test(const drg_dataset* ds, double test_fraction,
                                      uint64_t seed, drg_dataset** train_out,
                                      drg_dataset** test_out) {
    if (!ds || !train_out || !test_out) return fail(DRG_ERR_VALIDATION, "null argument");
    return guarded([&] {
        const Split split = split_dataset(ds->ds, 0.0, test_fraction, seed);
        std::vector<Eigen::Index> keep = split.train_idx;
        keep.insert(keep.end(), split.val_idx.begin(), split.val_idx.end());
        std::sort(keep.begin(), keep.end());
        *train_out = new drg_dataset{ds->ds.subset(keep)};
        *test_out = new drg_dataset{ds->ds.subset(split.test_idx)};
    });
}

void drg_dataset_free(drg_dataset* ds) { delete ds; }

void drg_train_options_init(drg_train_options* opts) {
    if (!opts) return;
    const TrainConfig defaults;
    opts->variant = DRG_VARIANT_MODIFIED;
    opts->metric = DRG_METRIC_EUCLIDEAN;
    opts->k = defaults.k;
    opts->alpha = defaults.alpha;
    opts->beta = defaults.beta;
    opts->validation_fraction = defaults.validation_fraction;
    opts->epochs = defaults.epochs;
    opts->batch_size = defaults.batch_size;
    opts->patience = defaults.patience;
    opts->learning_rate = defaults.learning_rate;
    opts->momentum = defaults.momentum;
    opts->seed = defaults.seed;
    opts->standardize_covariates = defaults.standardize_covariates ? 1 : 0;
    opts->rep_width = defaults.rep_width;
    opts->rep_depth = defaults.rep_depth;
    opts->head_width = defaults.head_width;
    opts->head_depth = defaults.head_depth;
    opts->head_l2 = defaults.head_l2;
}

drg_status drg_train(const drg_dataset* data, const drg_train_options* opts,
                     drg_model** out) {
    if (!data || !opts || !out) return fail(DRG_ERR_VALIDATION, "null argument");
    return guarded([&] {
        TrainConfig cfg;
        cfg.variant = opts->variant == DRG_VARIANT_BASELINE ? Variant::Baseline
                                                            : Variant::Modified;
        cfg.metric = to_metric(opts->metric);
        cfg.k = opts->k;
        cfg.alpha = opts->alpha;
        cfg.beta = opts->beta;
        cfg.validation_fraction = opts->validation_fraction;
        cfg.epochs = opts->epochs;
        cfg.batch_size = opts->batch_size;
        cfg.patience = opts->patience;
        cfg.learning_rate = opts->learning_rate;
        cfg.momentum = opts->momentum;
        cfg.seed = opts->seed;
        cfg.standardize_covariates = opts->standardize_covariates != 0;
        cfg.rep_width = opts->rep_width;
        cfg.rep_depth = opts->rep_depth;
        cfg.head_width = opts->head_width;
        cfg.head_depth = opts->head_depth;
        cfg.head_l2 = opts->head_l2;
        *out = new drg_model{train(data->ds, cfg)};
    });
}

drg_status drg_model_evaluate(const drg_model* model, const drg_dataset* queries,
                              int self_exclusion, drg_metrics* out) {
    if (!model || !queries || !out) return fail(DRG_ERR_VALIDATION, "null argument");
    return guarded([&] {
        const EvalMetrics m = evaluate(model->model, queries->ds, std::nullopt,
                                       self_exclusion != 0);
        out->eps_ate = m.eps_ate;
        out->eps_pehe = m.eps_pehe;
        out->eps_pehe_root = m.eps_pehe_root;
        out->psi_hat = m.psi_hat;
    });
}

drg_status drg_model_save(const drg_model* model, const char* path) {
    if (!model || !path) return fail(DRG_ERR_VALIDATION, "null argument");
    return guarded([&] { save_model(model->model, path); });
}

drg_status drg_model_load(const char* path, drg_model** out) {
    if (!path || !out) return fail(DRG_ERR_VALIDATION, "null argument");
    return guarded([&] { *out = new drg_model{load_model(path)}; });
}

double drg_model_epsilon(const drg_model* model) {
    return model ? model->model.epsilon : 0.0;
}

void drg_model_free(drg_model* model) { delete model; }

drg_status drg_performance_profile(const double* values, int64_t n_problems,
                                   int64_t n_models, const double* taus,
                                   int64_t n_taus, double* rho_out) {
    if (!values || !taus || !rho_out)
        return fail(DRG_ERR_VALIDATION, "null argument");
    return guarded([&] {
        ResultMatrix rm;
        rm.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                                   Eigen::Dynamic, Eigen::RowMajor>>(
            values, n_problems, n_models);
        Vector tau_grid = Eigen::Map<const Vector>(taus, n_taus);
        const ProfileCurves pc = performance_profile(rm, tau_grid);
        for (int64_t ti = 0; ti < n_taus; ++ti)
            for (int64_t m = 0; m < n_models; ++m)
                rho_out[ti * n_models + m] = pc.rho(ti, m);
    });
}

drg_status drg_far_test(const double* values, int64_t n_problems, int64_t n_models,
                        double* far_statistic, int64_t* best_index,
                        double* avg_ranks, double* pvalues,
                        double* finner_adjusted, int* decisions) {
    if (!values) return fail(DRG_ERR_VALIDATION, "null argument");
    return guarded([&] {
        ResultMatrix rm;
        rm.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                                   Eigen::Dynamic, Eigen::RowMajor>>(
            values, n_problems, n_models);
        const FarReport rep = far_report(rm);
        if (far_statistic) *far_statistic = rep.far_statistic;
        if (best_index) *best_index = rep.best_index;
        for (int64_t m = 0; m < n_models; ++m) {
            if (avg_ranks) avg_ranks[m] = rep.avg_aligned_rank[m];
            if (pvalues) pvalues[m] = rep.pvalues[m];
            if (finner_adjusted) finner_adjusted[m] = rep.finner_adjusted[m];
            if (decisions) {
                switch (rep.decisions[static_cast<std::size_t>(m)]) {
                    case Decision::Control: decisions[m] = -1; break;
                    case Decision::Reject: decisions[m] = 1; break;
                    case Decision::FailToReject: decisions[m] = 0; break;
                }
            }
        }
    });
}

drg_status drg_finner_adjust(const double* ascending_pvalues, int64_t m,
                             int k_comparisons, double* adjusted_out) {
    if (!ascending_pvalues || !adjusted_out)
        return fail(DRG_ERR_VALIDATION, "null argument");
    return guarded([&] {
        const Vector p = Eigen::Map<const Vector>(ascending_pvalues, m);
        const Vector adj = finner_adjust(p, k_comparisons);
        for (int64_t i = 0; i < m; ++i) adjusted_out[i] = adj[i];
    });
}

}  // extern "C"
