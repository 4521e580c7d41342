#include "odbench/detectors/proximity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace odbench {

namespace {

void check_k(std::size_t k, const NeighborTable& table) {
  if (k < 1 || k + 1 > table.size()) {
    throw std::invalid_argument("k out of range: k=" + std::to_string(k) +
                                ", n=" + std::to_string(table.size()));
  }
  if (k > table.k_max()) {
    throw std::invalid_argument("neighbor table too small for k=" + std::to_string(k));
  }
}

std::size_t table_k(std::size_t want, std::size_t n) { return std::min(want, n - 1); }

}  // namespace

ScoreVector knn_score(const NeighborTable& table, std::size_t k) {
  check_k(k, table);
  std::vector<double> s(table.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto row = table.row(i);
    double sum = 0.0;
    for (std::size_t t = 0; t < k; ++t) sum += row[t].distance;
    s[i] = sum / static_cast<double>(k);
  }
  return ScoreVector(std::move(s));
}

ScoreVector knn_score(const Matrix& x, std::size_t k) {
  return knn_score(build_neighbor_table(x, table_k(k, x.rows())), k);
}

ScoreVector kthnn_score(const NeighborTable& table, std::size_t k) {
  check_k(k, table);
  std::vector<double> s(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) s[i] = table.row(i)[k - 1].distance;
  return ScoreVector(std::move(s));
}

ScoreVector kthnn_score(const Matrix& x, std::size_t k) {
  return kthnn_score(build_neighbor_table(x, table_k(k, x.rows())), k);
}

ScoreVector lof_score(const Matrix& x, const NeighborTable& table, std::size_t k) {
  const std::size_t n = table.size();
  check_k(k, table);

  std::vector<double> kdist(n);
  std::vector<std::vector<Neighbor>> hood(n);
#pragma omp parallel for schedule(dynamic, 32)
  for (std::size_t i = 0; i < n; ++i) {
    hood[i] = neighborhood_with_ties(table, x, i, k);
    kdist[i] = table.row(i)[k - 1].distance;
  }

  // local reachability density: inverse mean reachability distance
  std::vector<double> lrd(n);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const Neighbor& nb : hood[i]) {
      sum += std::max(kdist[nb.index], nb.distance);
    }
    lrd[i] = static_cast<double>(hood[i].size()) / sum;
  }

  std::vector<double> s(n);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const Neighbor& nb : hood[i]) sum += lrd[nb.index];
    s[i] = sum / (static_cast<double>(hood[i].size()) * lrd[i]);
  }
  return ScoreVector(std::move(s));
}

ScoreVector lof_score(const Matrix& x, std::size_t k) {
  // a little slack keeps tie closures inside the stored rows
  return lof_score(x, build_neighbor_table(x, table_k(k + 8, x.rows())), k);
}

ScoreVector ensemble_lof_score(const Matrix& x, const NeighborTable& table,
                               std::span<const std::size_t> k_grid) {
  if (k_grid.empty()) throw std::invalid_argument("ensemble LOF: empty k grid");
  std::vector<double> best(x.rows(), -std::numeric_limits<double>::infinity());
  for (std::size_t k : k_grid) {
    const ScoreVector s = lof_score(x, table, k);
    for (std::size_t i = 0; i < x.rows(); ++i) best[i] = std::max(best[i], s[i]);
  }
  return ScoreVector(std::move(best));
}

ScoreVector ensemble_lof_score(const Matrix& x, std::span<const std::size_t> k_grid) {
  if (k_grid.empty()) throw std::invalid_argument("ensemble LOF: empty k grid");
  const std::size_t k_hi = *std::max_element(k_grid.begin(), k_grid.end());
  return ensemble_lof_score(x, build_neighbor_table(x, table_k(k_hi + 8, x.rows())), k_grid);
}

ScoreVector cof_score(const Matrix& x, const NeighborTable& table, std::size_t k) {
  const std::size_t n = table.size();
  check_k(k, table);

  // average chaining distance of each point over {p} + its k neighbors
  std::vector<double> ac(n);
#pragma omp parallel for schedule(dynamic, 32)
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = table.row(i);
    const std::size_t r = k + 1;
    std::vector<std::size_t> group(r);
    group[0] = i;
    for (std::size_t t = 0; t < k; ++t) group[t + 1] = row[t].index;

    // set-based nearest trail: grow greedily from p, always attaching the
    // unvisited member closest to the visited set (ties: lower index)
    std::vector<bool> visited(r, false);
    std::vector<double> dist_to_set(r, std::numeric_limits<double>::infinity());
    visited[0] = true;
    for (std::size_t t = 1; t < r; ++t) {
      dist_to_set[t] = euclidean_distance(x.row(i), x.row(group[t]));
    }
    double acd = 0.0;
    const double denom = static_cast<double>(r) * static_cast<double>(r - 1);
    for (std::size_t step = 1; step < r; ++step) {
      std::size_t pick = r;
      for (std::size_t t = 1; t < r; ++t) {
        if (visited[t]) continue;
        if (pick == r || dist_to_set[t] < dist_to_set[pick] ||
            (dist_to_set[t] == dist_to_set[pick] && group[t] < group[pick])) {
          pick = t;
        }
      }
      acd += (2.0 * static_cast<double>(r - step) / denom) * dist_to_set[pick];
      visited[pick] = true;
      for (std::size_t t = 1; t < r; ++t) {
        if (!visited[t]) {
          dist_to_set[t] = std::min(
              dist_to_set[t], euclidean_distance(x.row(group[pick]), x.row(group[t])));
        }
      }
    }
    ac[i] = acd;
  }

  std::vector<double> s(n);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = table.row(i);
    double neighbor_sum = 0.0;
    for (std::size_t t = 0; t < k; ++t) neighbor_sum += ac[row[t].index];
    s[i] = ac[i] * static_cast<double>(k) / neighbor_sum;
  }
  return ScoreVector(std::move(s));
}

ScoreVector cof_score(const Matrix& x, std::size_t k) {
  return cof_score(x, build_neighbor_table(x, table_k(k, x.rows())), k);
}

ScoreVector odin_score(const NeighborTable& table, std::size_t k) {
  const std::size_t n = table.size();
  check_k(k, table);
  std::vector<double> indegree(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = table.row(i);
    for (std::size_t t = 0; t < k; ++t) indegree[row[t].index] += 1.0;
  }
  for (double& v : indegree) v = -v;
  return ScoreVector(std::move(indegree));
}

ScoreVector odin_score(const Matrix& x, std::size_t k) {
  return odin_score(build_neighbor_table(x, table_k(k, x.rows())), k);
}

std::size_t abod_effective_k(std::size_t n) {
  if (n < 4) throw std::invalid_argument("ABOD: need at least 4 samples");
  return std::max<std::size_t>(2, std::min<std::size_t>(kAbodNeighbors, n - 3));
}

ScoreVector abod_score(const Matrix& x, const NeighborTable& table) {
  const std::size_t n = x.rows();
  const std::size_t k = abod_effective_k(n);
  if (table.k_max() < k) throw std::invalid_argument("ABOD: neighbor table too small");

  std::vector<double> s(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = table.row(i);
    const auto p = x.row(i);
    // plain variance of <a-p, b-p> / (|a-p|^2 |b-p|^2) over neighbor pairs
    std::vector<double> terms;
    terms.reserve(k * (k - 1) / 2);
    for (std::size_t a = 0; a < k; ++a) {
      const auto va = x.row(row[a].index);
      const double na2 = row[a].distance * row[a].distance;
      for (std::size_t b = a + 1; b < k; ++b) {
        const auto vb = x.row(row[b].index);
        const double nb2 = row[b].distance * row[b].distance;
        double dot = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j) {
          dot += (va[j] - p[j]) * (vb[j] - p[j]);
        }
        terms.push_back(dot / (na2 * nb2));
      }
    }
    double mean = 0.0;
    for (double t : terms) mean += t;
    mean /= static_cast<double>(terms.size());
    double var = 0.0;
    for (double t : terms) var += (t - mean) * (t - mean);
    s[i] = -var / static_cast<double>(terms.size());
  }
  return ScoreVector(std::move(s));
}

ScoreVector abod_score(const Matrix& x) {
  return abod_score(x, build_neighbor_table(x, abod_effective_k(x.rows())));
}

}  // namespace odbench
