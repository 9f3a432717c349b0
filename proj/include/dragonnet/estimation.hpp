#ifndef DRAGONNET_ESTIMATION_HPP
#define DRAGONNET_ESTIMATION_HPP

#include <optional>

#include "dragonnet/data.hpp"
#include "dragonnet/model.hpp"

namespace dragonnet {

struct EffectEstimate {
    double psi_hat = 0.0;   // estimated ATE; equals mean(per_sample_ite)
    Vector per_sample_ite;  // q_treg(1) - q_treg(0) per sample
};

// ATE estimator from model outputs. With use_fluctuation the outcome heads
// are shifted by the fluctuation term: q1 + eps/g and q0 - eps/(1-g);
// without it this is the plain plug-in mean(q1 - q0).
EffectEstimate estimate_effect(const ModelOutputs& out, double epsilon,
                               bool use_fluctuation);

// |mean(mu1 - mu0) - psi_hat|
double eps_ate(const EffectEstimate& est, const Vector& mu0, const Vector& mu1);

// mean squared difference between the true ITE (mu1 - mu0) and the
// predicted ITE (q1_hat - q0_hat); no square root.
double eps_pehe(const Vector& q0_hat, const Vector& q1_hat,
                const Vector& mu0, const Vector& mu1);

struct EvalMetrics {
    double eps_ate = 0.0;
    double eps_pehe = 0.0;       // paper convention, mean of squares
    double eps_pehe_root = 0.0;  // sqrt of the above, for cross-literature reading
    double psi_hat = 0.0;
};

// Full model evaluation against a semi-synthetic dataset with ground truth.
// use_fluctuation defaults to "true iff the model was trained with beta > 0".
// self_exclusion should be true when queries are the model's own training rows.
EvalMetrics evaluate(const DragonnetModel& model, const Dataset& queries,
                     std::optional<bool> use_fluctuation = std::nullopt,
                     bool self_exclusion = false);

}  // namespace dragonnet

#endif
