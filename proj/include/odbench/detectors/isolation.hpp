#pragma once

#include <cstddef>
#include <cstdint>

#include "odbench/types.hpp"

namespace odbench {

struct IsolationParams {
  std::size_t n_trees = 1000;
  std::size_t subsample = 256;     // clamped to n, drawn without replacement
  std::size_t extension_level = 1; // EIF only; clamped to d-1
  std::size_t n_estimators = 200;  // INNE
  std::size_t inne_subsample = 8;  // INNE hypersphere sample size
  std::uint64_t seed = 0;
};

/// Expected path length of an unsuccessful BST search over m points:
/// c(m) = 2 H(m-1) - 2 (m-1)/m, with the harmonic number summed exactly;
/// c(2) = 1 and c(m <= 1) = 0.
double path_length_norm(std::size_t m);

/// Isolation forest with axis-parallel uniform splits. Scores are
/// 2^(-E[path length]/c(subsample)), in (0, 1]. Per-tree randomness is a
/// counter stream keyed off (seed, tree), so results are bit-identical
/// for any thread count.
ScoreVector if_score(const Matrix& x, const IsolationParams& params);

/// Extended isolation forest: hyperplane splits whose normal vectors have
/// extension_level+1 non-zero standard-normal components and intercepts
/// drawn inside the node's bounding box.
ScoreVector eif_score(const Matrix& x, const IsolationParams& params);

/// Isolation with nearest-neighbor ensembles: hyperspheres around each
/// subsampled point with radius equal to its nearest within-sample
/// neighbor; queries score 1 - r(nn of center)/r(center) under the
/// smallest covering sphere, or 1 when uncovered.
ScoreVector inne_score(const Matrix& x, const IsolationParams& params);

}  // namespace odbench
