#ifndef DRAGONNET_NEIGHBORS_HPP
#define DRAGONNET_NEIGHBORS_HPP

#include <string>
#include <vector>

#include "dragonnet/nn.hpp"

namespace dragonnet {

enum class DistanceMetric { Manhattan, Euclidean, Chebyshev };

std::string metric_name(DistanceMetric m);

double minkowski_distance(const Vector& x, const Vector& y, DistanceMetric metric);

// Per-sample average outcome of the k nearest control-group (ybar0) and
// treatment-group (ybar1) neighbors.
struct NeighborAverages {
    Vector ybar0;
    Vector ybar1;
    int k = 0;
    DistanceMetric metric = DistanceMetric::Euclidean;
};

// Indices (into ref_x rows) of the k nearest samples with t == group,
// excluding `exclude` when >= 0. Ties broken by ascending index.
std::vector<Eigen::Index> knn_indices(const Vector& query,
                                      const Matrix& ref_x,
                                      const Vector& ref_t,
                                      int group, int k,
                                      DistanceMetric metric,
                                      Eigen::Index exclude = -1);

// Computes ybar0/ybar1 for every query row against the reference set.
// When self_exclusion is true the queries are taken to be the reference
// rows themselves (row i of queries == reference row i) and sample i is
// removed from its own factual group's candidate set.
NeighborAverages neighbor_averages(const Matrix& queries,
                                   const Matrix& ref_x,
                                   const Vector& ref_t,
                                   const Vector& ref_y,
                                   int k, DistanceMetric metric,
                                   bool self_exclusion);

}  // namespace dragonnet

#endif
