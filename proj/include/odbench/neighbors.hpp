#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "odbench/types.hpp"

namespace odbench {

struct Neighbor {
  std::size_t index;
  double distance;
};

/// For each sample, its k_max nearest other samples by Euclidean distance,
/// sorted by (distance, index). Rows have length min(k_max, n-1) and never
/// contain the query point itself.
class NeighborTable {
 public:
  NeighborTable() = default;
  NeighborTable(std::size_t n, std::size_t k, std::vector<Neighbor> flat)
      : n_(n), k_(k), flat_(std::move(flat)) {}

  std::size_t size() const { return n_; }
  std::size_t k_max() const { return k_; }
  std::span<const Neighbor> row(std::size_t i) const {
    return {flat_.data() + i * k_, k_};
  }

 private:
  std::size_t n_ = 0;
  std::size_t k_ = 0;  // row length = min(k_max, n-1)
  std::vector<Neighbor> flat_;
};

/// Exact k-nearest neighbors; ties broken by lower sample index. Uses a
/// k-d tree for d <= 16 and brute force above that, both bit-identical.
/// Throws if k_max >= n.
NeighborTable build_neighbor_table(const Matrix& x, std::size_t k_max);

/// The k-distance neighborhood of sample i: every other sample within the
/// distance of the k-th nearest neighbor, so ties at that radius are all
/// included. Falls back to a scan of x when the stored row is truncated
/// mid-tie.
std::vector<Neighbor> neighborhood_with_ties(const NeighborTable& table,
                                             const Matrix& x, std::size_t i,
                                             std::size_t k);

}  // namespace odbench
