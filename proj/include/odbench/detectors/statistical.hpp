#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "odbench/types.hpp"

namespace odbench {

/// Histogram size by penalized likelihood: the bin count D in [1, D_max]
/// maximizing L(D) - (D - 1 + log(D)^2.5), with L the log-likelihood of
/// the equal-width D-bin histogram density and D_max = max(n/log n, 2).
/// A constant vector gets a single bin.
std::size_t birge_rozenholc_bins(std::span<const double> x);

/// Histogram-based outlier score: per-feature equal-width histograms with
/// penalized-likelihood bin counts, densities scaled so the tallest bin is
/// 1, scores summed as log(1 / (density + 1e-12)).
ScoreVector hbos_score(const Matrix& x);

/// 100 sparse random projections (ceil(sqrt(d)) non-zero normal
/// components), a 1D histogram per projection, score = mean negative log
/// density across projections.
ScoreVector loda_score(const Matrix& x, std::uint64_t seed);

/// Principal component scores: keep the smallest leading set of
/// components whose cumulative explained variance exceeds the threshold,
/// score = sum of squared projections over eigenvalue. Components with
/// eigenvalue <= 1e-12 are never kept.
ScoreVector pca_score(const Matrix& x, double variance_threshold);

/// Leave-one-out Gaussian kernel density with per-dimension Scott
/// bandwidth sigma_f * n^(-1/(d+4)); score = -log density.
ScoreVector kde_score(const Matrix& x);

struct GmmTrace {
  ScoreVector scores;
  std::vector<double> log_likelihood;  // mean per-sample, one entry per iteration
};

/// Full-covariance Gaussian mixture fit by EM (ridge 1e-6, stop when the
/// mean log-likelihood gains < 1e-6 or after 200 iterations), seeded with
/// distance-weighted selection. Score = negative per-sample
/// log-likelihood.
ScoreVector gmm_score(const Matrix& x, std::size_t n_components, std::uint64_t seed);
GmmTrace gmm_score_traced(const Matrix& x, std::size_t n_components, std::uint64_t seed);

/// Copula-based detector: per-feature left/right ECDF tail probabilities,
/// scored as the sum over features of max(skew-selected tail, mean of the
/// two tails). Deterministic and parameter-free.
ScoreVector copod_score(const Matrix& x);

/// ECDF-based detector: sum over features of the larger of the two
/// negative-log tails (skew-selected included). Deterministic and
/// parameter-free.
ScoreVector ecod_score(const Matrix& x);

struct ClusterSplit {
  std::vector<std::size_t> sizes_desc;
  std::size_t boundary;  // 1-based; clusters [1..boundary] are "large"
};

/// Boundary between large and small clusters: the smallest b where the
/// first b clusters cover alpha*n samples or the size ratio to the next
/// cluster reaches beta.
ClusterSplit split_clusters(std::vector<std::size_t> sizes, double alpha, double beta,
                            std::size_t n);

/// Cluster-based local outlier factor. Points in large clusters score
/// their distance to the own centroid; points in small clusters the
/// distance to the nearest large centroid. weighted multiplies by the
/// point's cluster size (the classic CBLOF; unweighted is u-CBLOF).
ScoreVector cblof_score(const Matrix& x, std::size_t k, double alpha, double beta,
                        bool weighted, std::uint64_t seed);

}  // namespace odbench
