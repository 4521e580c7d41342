#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "odbench/neighbors.hpp"
#include "odbench/types.hpp"

namespace odbench {

enum class Algorithm {
  kAbod,
  kCblof,
  kCof,
  kCopod,
  kEcod,
  kEif,
  kEnsembleLof,
  kGmm,
  kHbos,
  kIf,
  kInne,
  kKde,
  kKnn,
  kKthnn,
  kLoda,
  kLof,
  kOdin,
  kPca,
  kUCblof,
};

/// One concrete hyperparameter assignment for an algorithm.
struct DetectorSpec {
  Algorithm algorithm;
  std::map<std::string, double> params;
};

const std::vector<Algorithm>& all_algorithms();
std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

/// The full evaluation grid for an algorithm: kNN-family k = 5..30,
/// COF k in {5,10,...,30}, CBLOF k x alpha x beta, forests over subsample
/// sizes and extension levels, GMM component counts, PCA variance
/// thresholds; parameter-free detectors get a singleton grid.
std::vector<DetectorSpec> grid_for(Algorithm a);

/// Whether results depend on the seed (forests, projections, k-means, EM).
bool is_randomized(Algorithm a);

/// Throws unless the spec's parameters exactly name the algorithm's grid
/// dimensions with values from the grid.
void validate_spec(const DetectorSpec& spec);

/// Largest neighbor-table row the algorithm's grid needs, zero when the
/// algorithm does not use neighbors.
std::size_t required_neighbors(Algorithm a, std::size_t n);

/// Runs one detector configuration. `table` may be null; it is only used
/// by neighbor-based detectors and must cover required_neighbors.
ScoreVector run_detector(const DetectorSpec& spec, const Matrix& x,
                         const NeighborTable* table, std::uint64_t seed);

}  // namespace odbench
