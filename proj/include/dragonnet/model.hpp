#ifndef DRAGONNET_MODEL_HPP
#define DRAGONNET_MODEL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dragonnet/data.hpp"
#include "dragonnet/neighbors.hpp"
#include "dragonnet/nn.hpp"

namespace dragonnet {

enum class Variant { Modified, Baseline };

std::string variant_name(Variant v);

// Propensity predictions are clipped to this range before the cross-entropy
// and the 1/g fluctuation term; both are unbounded as g -> {0,1}.
inline constexpr double kPropensityClip = 0.01;

struct TrainConfig {
    Variant variant = Variant::Modified;
    double alpha = 1.0;
    double beta = 1.0;
    int k = 10;
    DistanceMetric metric = DistanceMetric::Euclidean;
    double validation_fraction = 0.2;
    int epochs = 300;
    int batch_size = 64;
    int patience = 20;
    double learning_rate = 1e-5;
    double momentum = 0.9;
    std::uint64_t seed = 0;
    bool standardize_covariates = true;

    // architecture; defaults are the full-size model, tests shrink them
    Eigen::Index rep_width = 200;
    int rep_depth = 3;
    Eigen::Index head_width = 100;
    int head_depth = 2;
    double head_l2 = 1e-2;

    void validate() const;
};

struct ModelOutputs {
    Vector q0;  // predicted outcome under control
    Vector q1;  // predicted outcome under treatment
    Vector g;   // propensity, clipped into (0,1)
};

// Shared representation, two outcome heads and a linear-sigmoid propensity
// head. The Modified variant concatenates the neighbor outcome average onto
// each head's input; Baseline feeds the representation alone.
struct DragonnetModel {
    Variant variant = Variant::Modified;
    int k = 10;
    DistanceMetric metric = DistanceMetric::Euclidean;

    Network representation;
    Network head0;
    Network head1;
    Network propensity;
    double epsilon = 0.0;  // targeted-regularization fluctuation parameter

    double alpha = 1.0;
    double beta = 1.0;

    // outcome standardization (train split); predictions are mapped back
    double y_mean = 0.0;
    double y_std = 1.0;
    bool standardize_covariates = true;
    Standardizer x_transform;

    // training reference for neighbor lookups (transformed covariates,
    // standardized outcomes)
    Matrix ref_x;
    Vector ref_t;
    Vector ref_y;

    bool trained = false;

    Eigen::Index param_count() const;
    Vector pack() const;                // all weights plus epsilon (last entry)
    void unpack(const Vector& flat);
};

// Builds an untrained model with fan-based-uniform weights, deterministic
// per seed.
DragonnetModel init_model(Eigen::Index input_dim, const TrainConfig& cfg);

// Forward pass in standardized-outcome units. nbrs is ignored by the
// Baseline variant and may be empty for it.
ModelOutputs predict_std(const DragonnetModel& model, const Matrix& x,
                         const NeighborAverages& nbrs);

// End-to-end prediction on raw covariates: applies the covariate transform,
// computes neighbor averages against the training reference, and returns
// q0/q1 in original outcome units.
ModelOutputs predict(const DragonnetModel& model, const Matrix& x_raw,
                     bool self_exclusion = false);

// (1/n) sum [ (Q(t_i) - y_i)^2 + alpha * CE(g_i, t_i) ]
double base_loss(const ModelOutputs& out, const Vector& t, const Vector& y,
                 double alpha);

struct TregTerm {
    double value;    // (1/n) sum (y_i - q_tilde_i)^2
    Vector q_tilde;  // Q(t_i) + eps * (t_i/g_i - (1-t_i)/(1-g_i))
};

TregTerm targeted_regularizer(const ModelOutputs& out, const Vector& t,
                              const Vector& y, double epsilon);

// base_loss + beta * targeted regularizer + L2 penalties of all networks.
double full_loss(const DragonnetModel& model, const Matrix& x,
                 const NeighborAverages& nbrs, const Vector& t, const Vector& y);

// Same loss with its exact gradient w.r.t. pack(); returns the loss value.
double loss_and_gradients(const DragonnetModel& model, const Matrix& x,
                          const NeighborAverages& nbrs, const Vector& t,
                          const Vector& y, Vector& grad);

struct TrainLog {
    std::vector<double> train_loss;
    std::vector<double> val_loss;
    int best_epoch = 0;
    double best_val_loss = 0.0;
};

// Splits off the validation fraction (stratified), computes neighbor
// averages once, and jointly optimizes all weights and epsilon with
// momentum SGD; returns the best-validation-loss snapshot.
DragonnetModel train(const Dataset& data, const TrainConfig& cfg,
                     TrainLog* log = nullptr);

// Bit-exact model snapshot round trip (hexfloat text format).
void save_model(const DragonnetModel& model, const std::string& path);
DragonnetModel load_model(const std::string& path);

}  // namespace dragonnet

#endif
