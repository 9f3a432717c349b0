#ifndef DRAGONNET_DATA_HPP
#define DRAGONNET_DATA_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dragonnet/nn.hpp"

namespace dragonnet {

// Observational dataset with optional semi-synthetic ground truth.
// y is the factual outcome (y_i = mu_{t_i} + noise); y_cf, mu0, mu1 are
// present for semi-synthetic data only.
struct Dataset {
    Matrix X;
    Vector t;
    Vector y;
    std::optional<Vector> y_cf;
    std::optional<Vector> mu0;
    std::optional<Vector> mu1;

    Eigen::Index n() const { return X.rows(); }
    Eigen::Index d() const { return X.cols(); }
    bool has_ground_truth() const { return mu0.has_value() && mu1.has_value(); }
    Eigen::Index count_treated() const;

    Dataset subset(const std::vector<Eigen::Index>& idx) const;
    void validate() const;
};

// Headerless realization CSV, columns: t, y_factual, y_cfactual, mu0, mu1, x1..xd
Dataset load_ihdp_csv(const std::string& path);
void save_realization_csv(const Dataset& ds, const std::string& path);

struct SyntheticSpec {
    Eigen::Index n = 1000;
    Eigen::Index d = 5;
    double confounding_strength = 1.0;
    double ate_target = 1.0;
    double noise_sd = 1.0;
    std::uint64_t seed = 0;
};

// Linear-plus-smooth-nonlinearity response with constant treatment effect
// ate_target, so the true ATE is known exactly.
Dataset generate_synthetic(const SyntheticSpec& spec);

struct Split {
    std::vector<Eigen::Index> train_idx;
    std::vector<Eigen::Index> val_idx;
    std::vector<Eigen::Index> test_idx;
};

// Stratified by treatment group; deterministic per seed.
Split split_dataset(const Dataset& ds, double validation_fraction,
                    double test_fraction, std::uint64_t seed);

// Column-wise standardization fit on training rows. Zero-variance columns
// pass through unscaled.
struct Standardizer {
    Vector mean;
    Vector std;

    static Standardizer fit(const Matrix& train_rows);
    Matrix apply(const Matrix& rows) const;
    Matrix invert(const Matrix& rows) const;
};

}  // namespace dragonnet

#endif
