#include "dragonnet/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dragonnet/errors.hpp"

namespace dragonnet {

std::string metric_name(DistanceMetric m) {
    switch (m) {
        case DistanceMetric::Manhattan: return "manhattan";
        case DistanceMetric::Euclidean: return "euclidean";
        case DistanceMetric::Chebyshev: return "chebyshev";
    }
    return "?";
}

double minkowski_distance(const Vector& x, const Vector& y, DistanceMetric metric) {
    if (x.size() != y.size()) {
        std::ostringstream os;
        os << "minkowski_distance: length mismatch " << x.size() << " vs " << y.size();
        throw ValidationError(os.str());
    }
    switch (metric) {
        case DistanceMetric::Manhattan: return (x - y).lpNorm<1>();
        case DistanceMetric::Euclidean: return (x - y).norm();
        case DistanceMetric::Chebyshev: return (x - y).lpNorm<Eigen::Infinity>();
    }
    return 0.0;
}

std::vector<Eigen::Index> knn_indices(const Vector& query,
                                      const Matrix& ref_x,
                                      const Vector& ref_t,
                                      int group, int k,
                                      DistanceMetric metric,
                                      Eigen::Index exclude) {
    if (ref_x.rows() != ref_t.size())
        throw ValidationError("knn_indices: reference X and t row counts differ");
    if (query.size() != ref_x.cols())
        throw ValidationError("knn_indices: query dimension does not match reference");
    if (k <= 0)
        throw ValidationError("knn_indices: k must be positive");

    std::vector<std::pair<double, Eigen::Index>> cand;
    cand.reserve(static_cast<std::size_t>(ref_x.rows()));
    for (Eigen::Index i = 0; i < ref_x.rows(); ++i) {
        if (static_cast<int>(ref_t[i]) != group || i == exclude) continue;
        cand.emplace_back(minkowski_distance(query, ref_x.row(i).transpose(), metric), i);
    }
    if (cand.size() < static_cast<std::size_t>(k))
        throw GroupTooSmallError(group, static_cast<long>(cand.size()), k);

    // ties broken by ascending original index
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    std::vector<Eigen::Index> out(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) out[static_cast<std::size_t>(i)] = cand[static_cast<std::size_t>(i)].second;
    return out;
}

NeighborAverages neighbor_averages(const Matrix& queries,
                                   const Matrix& ref_x,
                                   const Vector& ref_t,
                                   const Vector& ref_y,
                                   int k, DistanceMetric metric,
                                   bool self_exclusion) {
    if (ref_x.rows() != ref_y.size() || ref_x.rows() != ref_t.size())
        throw ValidationError("neighbor_averages: inconsistent reference sizes");
    if (self_exclusion && queries.rows() != ref_x.rows())
        throw ValidationError(
            "neighbor_averages: self_exclusion requires queries to be the reference rows");

    NeighborAverages na;
    na.k = k;
    na.metric = metric;
    na.ybar0 = Vector::Zero(queries.rows());
    na.ybar1 = Vector::Zero(queries.rows());

    for (Eigen::Index i = 0; i < queries.rows(); ++i) {
        const Vector q = queries.row(i).transpose();
        for (int group : {0, 1}) {
            const Eigen::Index excl =
                (self_exclusion && static_cast<int>(ref_t[i]) == group) ? i : -1;
            std::vector<Eigen::Index> idx;
            try {
                idx = knn_indices(q, ref_x, ref_t, group, k, metric, excl);
            } catch (const GroupTooSmallError& e) {
                throw GroupTooSmallError(e.group, e.group_size, e.k, static_cast<long>(i));
            }
            double sum = 0.0;
            for (Eigen::Index j : idx) sum += ref_y[j];
            (group == 0 ? na.ybar0 : na.ybar1)[i] = sum / static_cast<double>(k);
        }
    }
    return na;
}

}  // namespace dragonnet
