// Independent reference implementations used only by tests. Everything here
// is deliberately written as plain loops, separate from the library code it
// checks.
#ifndef DRAGONNET_TESTS_ORACLES_HPP
#define DRAGONNET_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "dragonnet/neighbors.hpp"
#include "dragonnet/nn.hpp"

namespace oracles {

using dragonnet::Matrix;
using dragonnet::Vector;

// central finite differences of a scalar function over a flat parameter vector
inline Vector fd_gradient(const std::function<double(const Vector&)>& f,
                          const Vector& x0, double h = 1e-5) {
    Vector g(x0.size());
    Vector x = x0;
    for (Eigen::Index i = 0; i < x0.size(); ++i) {
        x[i] = x0[i] + h;
        const double fp = f(x);
        x[i] = x0[i] - h;
        const double fm = f(x);
        x[i] = x0[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

// |a-b| within rel * max(|a|,|b|) plus a small absolute floor for the
// near-zero components finite differences cannot resolve
inline bool grads_close(const Vector& a, const Vector& b, double rel = 1e-4,
                        double abs_floor = 1e-7) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double tol = rel * std::max(std::abs(a[i]), std::abs(b[i])) + abs_floor;
        if (std::abs(a[i] - b[i]) > tol) return false;
    }
    return a.size() == b.size();
}

inline double brute_distance(const Vector& x, const Vector& y,
                             dragonnet::DistanceMetric metric) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double d = std::abs(x[i] - y[i]);
        switch (metric) {
            case dragonnet::DistanceMetric::Manhattan: acc += d; break;
            case dragonnet::DistanceMetric::Euclidean: acc += d * d; break;
            case dragonnet::DistanceMetric::Chebyshev: acc = std::max(acc, d); break;
        }
    }
    return metric == dragonnet::DistanceMetric::Euclidean ? std::sqrt(acc) : acc;
}

// O(n log n) scan: sort every candidate by (distance, index), take k
inline std::vector<Eigen::Index> brute_knn(const Vector& query, const Matrix& ref_x,
                                           const Vector& ref_t, int group, int k,
                                           dragonnet::DistanceMetric metric,
                                           Eigen::Index exclude = -1) {
    std::vector<std::pair<double, Eigen::Index>> all;
    for (Eigen::Index i = 0; i < ref_x.rows(); ++i) {
        if (static_cast<int>(ref_t[i]) != group || i == exclude) continue;
        all.emplace_back(brute_distance(query, ref_x.row(i).transpose(), metric), i);
    }
    std::sort(all.begin(), all.end());
    std::vector<Eigen::Index> out;
    for (int i = 0; i < k; ++i) out.push_back(all[static_cast<std::size_t>(i)].second);
    return out;
}

inline dragonnet::NeighborAverages brute_neighbor_averages(
    const Matrix& queries, const Matrix& ref_x, const Vector& ref_t,
    const Vector& ref_y, int k, dragonnet::DistanceMetric metric,
    bool self_exclusion) {
    dragonnet::NeighborAverages na;
    na.k = k;
    na.metric = metric;
    na.ybar0 = Vector::Zero(queries.rows());
    na.ybar1 = Vector::Zero(queries.rows());
    for (Eigen::Index i = 0; i < queries.rows(); ++i) {
        for (int group : {0, 1}) {
            const Eigen::Index excl =
                (self_exclusion && static_cast<int>(ref_t[i]) == group) ? i : -1;
            const auto idx = brute_knn(queries.row(i).transpose(), ref_x, ref_t,
                                       group, k, metric, excl);
            double sum = 0.0;
            for (Eigen::Index j : idx) sum += ref_y[j];
            (group == 0 ? na.ybar0 : na.ybar1)[i] = sum / k;
        }
    }
    return na;
}

}  // namespace oracles

#endif
