#include "dragonnet/benchstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dragonnet/errors.hpp"

namespace dragonnet {

void ResultMatrix::validate() const {
    if (values.rows() == 0 || values.cols() == 0)
        throw ValidationError("result matrix is empty");
    if (!values.allFinite() || (values.array() < 0.0).any())
        throw ValidationError("result matrix entries must be finite and nonnegative");
    if (!model_names.empty() &&
        model_names.size() != static_cast<std::size_t>(values.cols()))
        throw ValidationError("model name count does not match columns");
    if (!problem_ids.empty() &&
        problem_ids.size() != static_cast<std::size_t>(values.rows()))
        throw ValidationError("problem id count does not match rows");
}

ProfileCurves performance_profile(const ResultMatrix& results, const Vector& taus) {
    results.validate();
    const Eigen::Index n = results.n_problems();
    const Eigen::Index k = results.n_models();

    // ratios to the per-problem best; a zero best is floored at 1e-12
    Matrix ratios(n, k);
    for (Eigen::Index s = 0; s < n; ++s) {
        const double best = std::max(results.values.row(s).minCoeff(), 1e-12);
        ratios.row(s) = results.values.row(s) / best;
    }

    ProfileCurves pc;
    pc.taus = taus;
    pc.rho.resize(taus.size(), k);
    for (Eigen::Index ti = 0; ti < taus.size(); ++ti)
        for (Eigen::Index m = 0; m < k; ++m)
            pc.rho(ti, m) =
                static_cast<double>((ratios.col(m).array() <= taus[ti]).count()) /
                static_cast<double>(n);
    return pc;
}

namespace {

// midranks over a flat value array (ties averaged)
std::vector<double> midranks(const std::vector<double>& vals) {
    const std::size_t n = vals.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && vals[order[j + 1]] == vals[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t m = i; m <= j; ++m) ranks[order[m]] = avg;
        i = j + 1;
    }
    return ranks;
}

double normal_two_sided_p(double z) {
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

}  // namespace

std::string decision_name(Decision d) {
    switch (d) {
        case Decision::Control: return "-";
        case Decision::Reject: return "Reject";
        case Decision::FailToReject: return "Fail to reject";
    }
    return "?";
}

FarReport friedman_aligned_ranks(const ResultMatrix& results) {
    results.validate();
    const Eigen::Index n = results.n_problems();
    const Eigen::Index k = results.n_models();
    if (n < 2 || k < 2)
        throw ValidationError("FAR test needs at least 2 problems and 2 models");

    // align by row (problem) means, then jointly rank everything
    std::vector<double> aligned(static_cast<std::size_t>(n * k));
    for (Eigen::Index s = 0; s < n; ++s) {
        const double row_mean = results.values.row(s).mean();
        for (Eigen::Index m = 0; m < k; ++m)
            aligned[static_cast<std::size_t>(s * k + m)] = results.values(s, m) - row_mean;
    }
    const std::vector<double> ranks = midranks(aligned);

    Vector model_rank_sum = Vector::Zero(k);
    Vector problem_rank_sum = Vector::Zero(n);
    for (Eigen::Index s = 0; s < n; ++s)
        for (Eigen::Index m = 0; m < k; ++m) {
            const double r = ranks[static_cast<std::size_t>(s * k + m)];
            model_rank_sum[m] += r;
            problem_rank_sum[s] += r;
        }

    FarReport rep;
    rep.avg_aligned_rank = model_rank_sum / static_cast<double>(n);

    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(n);
    const double kn = kd * nd;
    const double numerator =
        (kd - 1.0) * (model_rank_sum.squaredNorm() -
                      (kd * nd * nd / 4.0) * (kn + 1.0) * (kn + 1.0));
    const double denominator =
        kn * (kn + 1.0) * (2.0 * kn + 1.0) / 6.0 -
        problem_rank_sum.squaredNorm() / kd;
    rep.far_statistic = denominator != 0.0 ? numerator / denominator : 0.0;

    Eigen::Index best = 0;
    rep.avg_aligned_rank.minCoeff(&best);
    rep.best_index = static_cast<int>(best);

    rep.pvalues = Vector::Constant(k, std::numeric_limits<double>::quiet_NaN());
    const double se = std::sqrt(kd * (nd + 1.0) / 6.0);
    for (Eigen::Index m = 0; m < k; ++m) {
        if (m == best) continue;
        const double z = (rep.avg_aligned_rank[m] - rep.avg_aligned_rank[best]) / se;
        rep.pvalues[m] = normal_two_sided_p(z);
    }
    return rep;
}

Vector finner_adjust(const Vector& ascending_pvalues, int k_comparisons) {
    const Eigen::Index m = ascending_pvalues.size();
    if (k_comparisons <= 0)
        throw ValidationError("finner_adjust: k_comparisons must be positive");
    for (Eigen::Index i = 0; i < m; ++i) {
        if (ascending_pvalues[i] < 0.0 || ascending_pvalues[i] > 1.0)
            throw ValidationError("finner_adjust: p-values must lie in [0,1]");
        if (i > 0 && ascending_pvalues[i] < ascending_pvalues[i - 1])
            throw ValidationError("finner_adjust: p-values must be ascending");
    }
    Vector adj(m);
    double running_max = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        const double expo = static_cast<double>(k_comparisons) / static_cast<double>(i + 1);
        const double v = 1.0 - std::pow(1.0 - ascending_pvalues[i], expo);
        running_max = std::max(running_max, v);
        adj[i] = std::min(1.0, running_max);
    }
    return adj;
}

FarReport far_report(const ResultMatrix& results, double level) {
    FarReport rep = friedman_aligned_ranks(results);
    const Eigen::Index k = results.n_models();

    std::vector<Eigen::Index> others;
    for (Eigen::Index m = 0; m < k; ++m)
        if (m != rep.best_index) others.push_back(m);
    std::sort(others.begin(), others.end(), [&](Eigen::Index a, Eigen::Index b) {
        return rep.pvalues[a] < rep.pvalues[b];
    });

    Vector sorted_p(static_cast<Eigen::Index>(others.size()));
    for (std::size_t i = 0; i < others.size(); ++i)
        sorted_p[static_cast<Eigen::Index>(i)] = rep.pvalues[others[i]];
    const Vector adj = finner_adjust(sorted_p, static_cast<int>(others.size()));

    rep.finner_adjusted = Vector::Constant(k, std::numeric_limits<double>::quiet_NaN());
    rep.decisions.assign(static_cast<std::size_t>(k), Decision::Control);
    for (std::size_t i = 0; i < others.size(); ++i) {
        const Eigen::Index m = others[i];
        rep.finner_adjusted[m] = adj[static_cast<Eigen::Index>(i)];
        rep.decisions[static_cast<std::size_t>(m)] =
            adj[static_cast<Eigen::Index>(i)] <= level ? Decision::Reject
                                                       : Decision::FailToReject;
    }
    return rep;
}

}  // namespace dragonnet
