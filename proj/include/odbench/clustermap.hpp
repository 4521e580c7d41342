#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "odbench/types.hpp"

namespace odbench {

/// 1 - Pearson correlation between every pair of rows; throws when a row
/// has zero variance (correlation undefined).
Matrix pearson_distance_matrix(const Matrix& rows);

struct Dendrogram {
  struct Merge {
    std::size_t a, b;   // node ids; leaves are 0..n-1, merge t creates n+t
    double height;
    std::size_t size;   // leaves under the merged node
  };
  std::vector<Merge> merges;  // n-1 entries, heights non-decreasing
  std::size_t n_leaves = 0;

  std::vector<std::size_t> leaves_under(std::size_t node) const;
};

/// Unweighted average-linkage (UPGMA) clustering of a symmetric distance
/// matrix. Equal-distance pairs merge in lexicographic order of the
/// clusters' smallest leaf indices.
Dendrogram average_linkage(const Matrix& dist);

/// Splits at the final merge into the two top-level subtrees' leaf sets.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> two_cluster_cut(
    const Dendrogram& dend);

/// Dendrogram-consistent leaf permutation minimizing the sum of adjacent
/// leaf distances (subtree flips only), by dynamic programming over
/// (subtree, boundary leaf) states.
std::vector<std::size_t> optimal_leaf_order(const Dendrogram& dend, const Matrix& dist);

void write_dendrogram_json(const Dendrogram& dend,
                           const std::vector<std::string>& leaf_names,
                           const std::string& path);

/// Heatmap with marginal dendrograms, rows/columns permuted by optimal
/// leaf order.
void write_clustermap_svg(const AucMatrix& m, const std::string& path);

}  // namespace odbench
