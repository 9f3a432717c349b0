#ifndef DRAGONNET_BENCHSTATS_HPP
#define DRAGONNET_BENCHSTATS_HPP

#include <string>
#include <vector>

#include "dragonnet/nn.hpp"

namespace dragonnet {

// Lower-is-better metric values, one row per problem, one column per model.
struct ResultMatrix {
    Matrix values;
    std::vector<std::string> model_names;
    std::vector<std::string> problem_ids;

    Eigen::Index n_problems() const { return values.rows(); }
    Eigen::Index n_models() const { return values.cols(); }
    void validate() const;
};

// Dolan-More profile: rho(tau) per model, rows follow the tau grid.
struct ProfileCurves {
    Vector taus;
    Matrix rho;  // n_taus x n_models
};

ProfileCurves performance_profile(const ResultMatrix& results, const Vector& taus);

enum class Decision { Control, Reject, FailToReject };

std::string decision_name(Decision d);

struct FarReport {
    Vector avg_aligned_rank;      // per model
    double far_statistic = 0.0;
    int best_index = 0;           // control model (lowest average rank)
    Vector pvalues;               // two-sided normal, vs control; NaN at control
    Vector finner_adjusted;       // NaN at control
    std::vector<Decision> decisions;  // at level 0.05
};

// Friedman Aligned-Ranks: align by row means, jointly rank all values
// (midranks on ties), then compare every model against the best-ranked one.
FarReport friedman_aligned_ranks(const ResultMatrix& results);

// Step-down Finner adjustment over ascending raw p-values:
// APV_i = min{1, max_{j<=i} [1 - (1 - p_j)^(k/j)]}.
Vector finner_adjust(const Vector& ascending_pvalues, int k_comparisons);

// friedman_aligned_ranks with the Finner columns filled in.
FarReport far_report(const ResultMatrix& results, double level = 0.05);

}  // namespace dragonnet

#endif
