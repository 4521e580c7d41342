#pragma once

#include <cstddef>
#include <span>

#include "odbench/neighbors.hpp"
#include "odbench/types.hpp"

namespace odbench {

/// Mean distance to the k nearest neighbors.
ScoreVector knn_score(const NeighborTable& table, std::size_t k);
ScoreVector knn_score(const Matrix& x, std::size_t k);

/// Distance to the k-th nearest neighbor.
ScoreVector kthnn_score(const NeighborTable& table, std::size_t k);
ScoreVector kthnn_score(const Matrix& x, std::size_t k);

/// Local outlier factor with k-distance neighborhoods: every point at
/// exactly the k-distance belongs to the neighborhood, so it can hold
/// more than k members under ties.
ScoreVector lof_score(const Matrix& x, const NeighborTable& table, std::size_t k);
ScoreVector lof_score(const Matrix& x, std::size_t k);

/// Pointwise maximum of lof_score over a grid of k values. One detector,
/// not a grid to average afterwards.
ScoreVector ensemble_lof_score(const Matrix& x, const NeighborTable& table,
                               std::span<const std::size_t> k_grid);
ScoreVector ensemble_lof_score(const Matrix& x, std::span<const std::size_t> k_grid);

/// Connectivity-based outlier factor: average chaining distance along the
/// set-based nearest trail through the k-neighborhood, divided by the
/// neighbors' average. Never materializes an n x n distance matrix.
ScoreVector cof_score(const Matrix& x, const NeighborTable& table, std::size_t k);
ScoreVector cof_score(const Matrix& x, std::size_t k);

/// Negative indegree in the directed k-nearest-neighbor graph.
ScoreVector odin_score(const NeighborTable& table, std::size_t k);
ScoreVector odin_score(const Matrix& x, std::size_t k);

/// Fast angle-based outlier detection over the 60 nearest neighbors
/// (clamped to n-3 on small inputs, never below 2). The score is the
/// negated variance over neighbor pairs of the distance-weighted cosine.
ScoreVector abod_score(const Matrix& x, const NeighborTable& table);
ScoreVector abod_score(const Matrix& x);

constexpr std::size_t kAbodNeighbors = 60;

/// Neighborhood size ABOD will use for a dataset of n samples.
std::size_t abod_effective_k(std::size_t n);

}  // namespace odbench
