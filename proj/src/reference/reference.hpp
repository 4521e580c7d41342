#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "odbench/clustermap.hpp"
#include "odbench/types.hpp"

// Serial direct-from-definition implementations. They trade speed for
// obviousness and stay independent of the optimized kernels so tests can
// compare the two; the benchmark tool times them against each other.
namespace odbench::ref {

struct NeighborRef {
  std::size_t index;
  double distance;
};

/// All-pairs scan sorted by (distance, index), truncated to k_max.
std::vector<std::vector<NeighborRef>> brute_force_neighbors(const Matrix& x,
                                                            std::size_t k_max);

std::vector<double> knn_mean_direct(const Matrix& x, std::size_t k);
std::vector<double> kth_distance_direct(const Matrix& x, std::size_t k);

/// Reachability-distance LOF exactly as defined: k-distance neighborhoods
/// including all ties, lrd over reachability, LOF as the lrd ratio mean.
std::vector<double> lof_direct(const Matrix& x, std::size_t k);

/// Set-based nearest trail over {p} + kNN(p), average chaining distance
/// with linear weights, COF as the ratio to the neighbors' mean.
std::vector<double> cof_direct(const Matrix& x, std::size_t k);

/// Variance over all pairs from the ABOD neighborhood of the
/// distance-weighted cosine, negated.
std::vector<double> abod_direct(const Matrix& x);

std::vector<double> odin_indegree_direct(const Matrix& x, std::size_t k);

/// O(n^2) win/tie pair counting.
double auc_pair_count(std::span<const double> scores, std::span<const int> labels);

/// Linear-interpolation quantile at p*(n-1), written against an
/// independently sorted copy.
double quantile_direct(std::vector<double> values, double p);

/// Principal-component score via a cyclic Jacobi eigensolver.
std::vector<double> pca_direct(const Matrix& x, double variance_threshold);

/// Plain leave-one-out Gaussian kernel sum (no log-space tricks).
std::vector<double> kde_direct(const Matrix& x);

/// UPGMA recomputing every cross-cluster average from the original
/// distance matrix at each step.
Dendrogram upgma_naive(const Matrix& dist);

/// Minimum adjacent-distance sum over all 2^(n-1) dendrogram flips.
double leaf_order_exhaustive(const Dendrogram& dend, const Matrix& dist);

/// Mean Friedman ranks via repeated sorting.
std::vector<double> friedman_mean_ranks_direct(const AucMatrix& m);

double harmonic_direct(std::size_t n);

}  // namespace odbench::ref
