#include "dragonnet/estimation.hpp"

#include <cmath>

#include "dragonnet/errors.hpp"

namespace dragonnet {

EffectEstimate estimate_effect(const ModelOutputs& out, double epsilon,
                               bool use_fluctuation) {
    const Eigen::Index n = out.q0.size();
    if (out.q1.size() != n || out.g.size() != n)
        throw ValidationError("estimate_effect: output length mismatch");
    EffectEstimate est;
    est.per_sample_ite.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double q1 = out.q1[i];
        double q0 = out.q0[i];
        if (use_fluctuation && epsilon != 0.0) {
            q1 += epsilon / out.g[i];
            q0 -= epsilon / (1.0 - out.g[i]);
        }
        est.per_sample_ite[i] = q1 - q0;
    }
    est.psi_hat = n > 0 ? est.per_sample_ite.mean() : 0.0;
    return est;
}

double eps_ate(const EffectEstimate& est, const Vector& mu0, const Vector& mu1) {
    if (mu0.size() != mu1.size())
        throw ValidationError("eps_ate: ground-truth length mismatch");
    return std::abs((mu1 - mu0).mean() - est.psi_hat);
}

double eps_pehe(const Vector& q0_hat, const Vector& q1_hat,
                const Vector& mu0, const Vector& mu1) {
    const Eigen::Index n = mu0.size();
    if (q0_hat.size() != n || q1_hat.size() != n || mu1.size() != n)
        throw ValidationError("eps_pehe: length mismatch");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double diff = (mu1[i] - mu0[i]) - (q1_hat[i] - q0_hat[i]);
        acc += diff * diff;
    }
    return acc / static_cast<double>(n);
}

EvalMetrics evaluate(const DragonnetModel& model, const Dataset& queries,
                     std::optional<bool> use_fluctuation, bool self_exclusion) {
    if (!model.trained)
        throw ContractError("evaluate: model has not been trained");
    if (!queries.has_ground_truth())
        throw ValidationError("evaluate: dataset has no ground-truth surfaces");

    const bool use_fluct = use_fluctuation.value_or(model.beta > 0.0);

    const Matrix x = model.standardize_covariates
                         ? model.x_transform.apply(queries.X)
                         : queries.X;
    NeighborAverages nbrs;
    if (model.variant == Variant::Modified)
        nbrs = neighbor_averages(x, model.ref_x, model.ref_t, model.ref_y,
                                 model.k, model.metric, self_exclusion);
    const ModelOutputs out_std = predict_std(model, x, nbrs);
    const EffectEstimate est_std = estimate_effect(out_std, model.epsilon, use_fluct);

    // everything below is in original outcome units
    EffectEstimate est;
    est.per_sample_ite = est_std.per_sample_ite * model.y_std;
    est.psi_hat = est_std.psi_hat * model.y_std;

    Vector q0_hat(queries.n()), q1_hat(queries.n());
    for (Eigen::Index i = 0; i < queries.n(); ++i) {
        double q1 = out_std.q1[i];
        double q0 = out_std.q0[i];
        if (use_fluct && model.epsilon != 0.0) {
            q1 += model.epsilon / out_std.g[i];
            q0 -= model.epsilon / (1.0 - out_std.g[i]);
        }
        q1_hat[i] = q1 * model.y_std + model.y_mean;
        q0_hat[i] = q0 * model.y_std + model.y_mean;
    }

    EvalMetrics m;
    m.psi_hat = est.psi_hat;
    m.eps_ate = eps_ate(est, *queries.mu0, *queries.mu1);
    m.eps_pehe = eps_pehe(q0_hat, q1_hat, *queries.mu0, *queries.mu1);
    m.eps_pehe_root = std::sqrt(m.eps_pehe);
    return m;
}

}  // namespace dragonnet
