#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>

#include "dragonnet/dragonnet_c.h"

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

drg_dataset* make_dataset(int64_t n, uint64_t seed) {
    drg_synthetic_spec spec;
    drg_synthetic_spec_init(&spec);
    spec.n = n;
    spec.seed = seed;
    drg_dataset* ds = nullptr;
    REQUIRE(drg_dataset_generate(&spec, &ds) == DRG_OK);
    REQUIRE(ds != nullptr);
    return ds;
}

drg_train_options small_options() {
    drg_train_options opts;
    drg_train_options_init(&opts);
    opts.k = 3;
    opts.epochs = 15;
    opts.learning_rate = 1e-3;
    opts.rep_width = 16;
    opts.head_width = 8;
    opts.seed = 5;
    return opts;
}

}  // namespace

TEST_CASE("c api: option defaults") {
    drg_train_options opts;
    drg_train_options_init(&opts);
    CHECK(opts.variant == DRG_VARIANT_MODIFIED);
    CHECK(opts.metric == DRG_METRIC_EUCLIDEAN);
    CHECK(opts.k == 10);
    CHECK(opts.alpha == 1.0);
    CHECK(opts.beta == 1.0);
    CHECK(opts.validation_fraction == 0.2);
    CHECK(opts.epochs == 300);
    CHECK(opts.batch_size == 64);
    CHECK(opts.patience == 20);
    CHECK(opts.learning_rate == 1e-5);
    CHECK(opts.momentum == 0.9);
    CHECK(opts.standardize_covariates == 1);
    CHECK(opts.rep_width == 200);
    CHECK(opts.rep_depth == 3);
    CHECK(opts.head_width == 100);
    CHECK(opts.head_depth == 2);
    CHECK(opts.head_l2 == 1e-2);
}

TEST_CASE("c api: missing file surfaces an IO error with a message") {
    drg_dataset* ds = nullptr;
    const drg_status st = drg_dataset_load_csv("/nonexistent/nope.csv", &ds);
    CHECK(st == DRG_ERR_IO);
    CHECK(ds == nullptr);
    CHECK(std::strlen(drg_last_error()) > 0);
}

TEST_CASE("c api: generate, inspect, save and reload a dataset") {
    drg_dataset* ds = make_dataset(120, 9);
    CHECK(drg_dataset_num_samples(ds) == 120);
    CHECK(drg_dataset_num_features(ds) == 5);
    CHECK(drg_dataset_num_treated(ds) > 0);
    CHECK(drg_dataset_num_treated(ds) < 120);
    CHECK(drg_dataset_has_ground_truth(ds) == 1);
    double ate = 0.0;
    REQUIRE(drg_dataset_true_ate(ds, &ate) == DRG_OK);
    CHECK(ate == doctest::Approx(1.0).epsilon(1e-9));

    const std::string path = temp_path("drg_capi_ds.csv");
    REQUIRE(drg_dataset_save_csv(ds, path.c_str()) == DRG_OK);
    drg_dataset* back = nullptr;
    REQUIRE(drg_dataset_load_csv(path.c_str(), &back) == DRG_OK);
    CHECK(drg_dataset_num_samples(back) == 120);
    CHECK(drg_dataset_num_treated(back) == drg_dataset_num_treated(ds));
    std::remove(path.c_str());
    drg_dataset_free(back);
    drg_dataset_free(ds);
}

TEST_CASE("c api: stratified test split partitions the samples") {
    drg_dataset* ds = make_dataset(200, 10);
    drg_dataset* train = nullptr;
    drg_dataset* test = nullptr;
    REQUIRE(drg_dataset_split_off_test(ds, 0.25, 77, &train, &test) == DRG_OK);
    CHECK(drg_dataset_num_samples(train) + drg_dataset_num_samples(test) == 200);
    // per-group rounding can move the carve-out by one sample
    CHECK(drg_dataset_num_samples(test) >= 49);
    CHECK(drg_dataset_num_samples(test) <= 51);
    CHECK(drg_dataset_num_treated(train) + drg_dataset_num_treated(test) ==
          drg_dataset_num_treated(ds));
    drg_dataset_free(train);
    drg_dataset_free(test);
    drg_dataset_free(ds);
}

TEST_CASE("c api: train, evaluate, snapshot round trip") {
    drg_dataset* ds = make_dataset(150, 11);
    const drg_train_options opts = small_options();
    drg_model* model = nullptr;
    REQUIRE(drg_train(ds, &opts, &model) == DRG_OK);
    REQUIRE(model != nullptr);

    drg_metrics m;
    REQUIRE(drg_model_evaluate(model, ds, 0, &m) == DRG_OK);
    CHECK(std::isfinite(m.eps_ate));
    CHECK(m.eps_pehe >= 0.0);
    CHECK(m.eps_pehe_root == doctest::Approx(std::sqrt(m.eps_pehe)).epsilon(1e-12));
    CHECK(std::isfinite(m.psi_hat));

    const std::string snap = temp_path("drg_capi_model.snap");
    REQUIRE(drg_model_save(model, snap.c_str()) == DRG_OK);
    drg_model* loaded = nullptr;
    REQUIRE(drg_model_load(snap.c_str(), &loaded) == DRG_OK);
    CHECK(drg_model_epsilon(loaded) == drg_model_epsilon(model));
    drg_metrics m2;
    REQUIRE(drg_model_evaluate(loaded, ds, 0, &m2) == DRG_OK);
    CHECK(m2.psi_hat == m.psi_hat);
    CHECK(m2.eps_pehe == m.eps_pehe);
    std::remove(snap.c_str());
    drg_model_free(loaded);
    drg_model_free(model);
    drg_dataset_free(ds);
}

TEST_CASE("c api: training determinism across calls") {
    drg_dataset* ds = make_dataset(100, 12);
    const drg_train_options opts = small_options();
    drg_model* a = nullptr;
    drg_model* b = nullptr;
    REQUIRE(drg_train(ds, &opts, &a) == DRG_OK);
    REQUIRE(drg_train(ds, &opts, &b) == DRG_OK);
    drg_metrics ma, mb;
    REQUIRE(drg_model_evaluate(a, ds, 0, &ma) == DRG_OK);
    REQUIRE(drg_model_evaluate(b, ds, 0, &mb) == DRG_OK);
    CHECK(ma.psi_hat == mb.psi_hat);
    CHECK(ma.eps_pehe == mb.eps_pehe);
    drg_model_free(a);
    drg_model_free(b);
    drg_dataset_free(ds);
}

TEST_CASE("c api: too-small neighbor groups map to the dedicated status") {
    drg_dataset* ds = make_dataset(12, 13);
    drg_train_options opts = small_options();
    opts.k = 50;
    drg_model* model = nullptr;
    CHECK(drg_train(ds, &opts, &model) == DRG_ERR_GROUP_TOO_SMALL);
    CHECK(model == nullptr);
    CHECK(std::strlen(drg_last_error()) > 0);
    drg_dataset_free(ds);
}

TEST_CASE("c api: invalid training options map to validation status") {
    drg_dataset* ds = make_dataset(50, 14);
    drg_train_options opts = small_options();
    opts.learning_rate = -1.0;
    drg_model* model = nullptr;
    CHECK(drg_train(ds, &opts, &model) == DRG_ERR_VALIDATION);
    drg_dataset_free(ds);
}

TEST_CASE("c api: performance profile over the symmetric 2x2 case") {
    const double values[4] = {1, 2, 2, 1};  // row-major, 2 problems x 2 models
    const double taus[2] = {1.0, 2.0};
    double rho[4] = {0, 0, 0, 0};
    REQUIRE(drg_performance_profile(values, 2, 2, taus, 2, rho) == DRG_OK);
    CHECK(rho[0] == 0.5);
    CHECK(rho[1] == 0.5);
    CHECK(rho[2] == 1.0);
    CHECK(rho[3] == 1.0);
}

TEST_CASE("c api: FAR test over the hand-computed 3x2 case") {
    const double values[6] = {1, 3, 2, 4, 5, 9};
    double far = 0.0;
    int64_t best = -1;
    double ranks[2], pvals[2], finner[2];
    int decisions[2];
    REQUIRE(drg_far_test(values, 3, 2, &far, &best, ranks, pvals, finner,
                         decisions) == DRG_OK);
    CHECK(far == doctest::Approx(40.5 / 17.5).epsilon(1e-13));
    CHECK(best == 0);
    CHECK(ranks[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(ranks[1] == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(std::isnan(pvals[0]));
    CHECK(std::isnan(finner[0]));
    CHECK(decisions[0] == -1);
    CHECK((decisions[1] == 0 || decisions[1] == 1));
    CHECK(pvals[1] > 0.0);
    // with one comparison the adjustment is 1-(1-p)^1, equal up to rounding
    CHECK(finner[1] == doctest::Approx(pvals[1]).epsilon(1e-12));
}

TEST_CASE("c api: finner adjustment and its input validation") {
    const double p[3] = {0.01, 0.2, 0.5};
    double adj[3];
    REQUIRE(drg_finner_adjust(p, 3, 3, adj) == DRG_OK);
    CHECK(adj[0] == doctest::Approx(1.0 - std::pow(0.99, 3.0)).epsilon(1e-14));
    CHECK(adj[2] == doctest::Approx(0.5).epsilon(1e-14));

    const double bad[2] = {0.5, 0.2};
    CHECK(drg_finner_adjust(bad, 2, 2, adj) == DRG_ERR_VALIDATION);
    CHECK(std::strlen(drg_last_error()) > 0);
}

TEST_CASE("c api: null arguments are rejected, not crashed on") {
    CHECK(drg_dataset_load_csv(nullptr, nullptr) == DRG_ERR_VALIDATION);
    CHECK(drg_dataset_generate(nullptr, nullptr) == DRG_ERR_VALIDATION);
    CHECK(drg_train(nullptr, nullptr, nullptr) == DRG_ERR_VALIDATION);
    CHECK(drg_model_evaluate(nullptr, nullptr, 0, nullptr) == DRG_ERR_VALIDATION);
}
