#include "reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "odbench/detectors/proximity.hpp"

namespace odbench::ref {

namespace {

double dist(const Matrix& x, std::size_t i, std::size_t j) {
  return euclidean_distance(x.row(i), x.row(j));
}

std::vector<NeighborRef> neighbors_of(const Matrix& x, std::size_t i) {
  std::vector<NeighborRef> all;
  all.reserve(x.rows() - 1);
  for (std::size_t j = 0; j < x.rows(); ++j) {
    if (j != i) all.push_back({j, dist(x, i, j)});
  }
  std::sort(all.begin(), all.end(), [](const NeighborRef& a, const NeighborRef& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
  });
  return all;
}

}  // namespace

std::vector<std::vector<NeighborRef>> brute_force_neighbors(const Matrix& x,
                                                            std::size_t k_max) {
  std::vector<std::vector<NeighborRef>> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto all = neighbors_of(x, i);
    all.resize(std::min(k_max, all.size()));
    out[i] = std::move(all);
  }
  return out;
}

std::vector<double> knn_mean_direct(const Matrix& x, std::size_t k) {
  std::vector<double> s(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto nb = neighbors_of(x, i);
    double sum = 0.0;
    for (std::size_t t = 0; t < k; ++t) sum += nb[t].distance;
    s[i] = sum / static_cast<double>(k);
  }
  return s;
}

std::vector<double> kth_distance_direct(const Matrix& x, std::size_t k) {
  std::vector<double> s(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) s[i] = neighbors_of(x, i)[k - 1].distance;
  return s;
}

std::vector<double> lof_direct(const Matrix& x, std::size_t k) {
  const std::size_t n = x.rows();
  std::vector<double> kdist(n);
  std::vector<std::vector<NeighborRef>> hood(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto nb = neighbors_of(x, i);
    kdist[i] = nb[k - 1].distance;
    for (const auto& r : nb) {
      if (r.distance <= kdist[i]) hood[i].push_back(r);
    }
  }
  std::vector<double> lrd(n);
  for (std::size_t i = 0; i < n; ++i) {
    double reach = 0.0;
    for (const auto& r : hood[i]) reach += std::max(kdist[r.index], r.distance);
    lrd[i] = static_cast<double>(hood[i].size()) / reach;
  }
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const auto& r : hood[i]) sum += lrd[r.index];
    s[i] = sum / (static_cast<double>(hood[i].size()) * lrd[i]);
  }
  return s;
}

std::vector<double> cof_direct(const Matrix& x, std::size_t k) {
  const std::size_t n = x.rows();
  std::vector<std::vector<std::size_t>> knn(n);
  std::vector<double> ac(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto nb = neighbors_of(x, i);
    for (std::size_t t = 0; t < k; ++t) knn[i].push_back(nb[t].index);

    std::vector<std::size_t> group{i};
    std::vector<std::size_t> rest = knn[i];
    const std::size_t r = k + 1;
    double acd = 0.0;
    std::size_t step = 1;
    while (!rest.empty()) {
      // nearest unvisited member to the visited set
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_t = 0;
      for (std::size_t t = 0; t < rest.size(); ++t) {
        double dmin = std::numeric_limits<double>::infinity();
        for (std::size_t g : group) dmin = std::min(dmin, dist(x, g, rest[t]));
        if (dmin < best || (dmin == best && rest[t] < rest[best_t])) {
          best = dmin;
          best_t = t;
        }
      }
      acd += 2.0 * static_cast<double>(r - step) /
             (static_cast<double>(r) * static_cast<double>(r - 1)) * best;
      group.push_back(rest[best_t]);
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(best_t));
      ++step;
    }
    ac[i] = acd;
  }
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    double nb_sum = 0.0;
    for (std::size_t j : knn[i]) nb_sum += ac[j];
    s[i] = ac[i] * static_cast<double>(k) / nb_sum;
  }
  return s;
}

std::vector<double> abod_direct(const Matrix& x) {
  const std::size_t n = x.rows();
  const std::size_t k = abod_effective_k(n);
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto nb = neighbors_of(x, i);
    std::vector<double> terms;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        const auto va = x.row(nb[a].index), vb = x.row(nb[b].index), p = x.row(i);
        double dot = 0.0, na2 = 0.0, nb2 = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j) {
          const double da = va[j] - p[j], db = vb[j] - p[j];
          dot += da * db;
          na2 += da * da;
          nb2 += db * db;
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
  return s;
}

std::vector<double> odin_indegree_direct(const Matrix& x, std::size_t k) {
  const std::size_t n = x.rows();
  std::vector<double> s(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto nb = neighbors_of(x, i);
    for (std::size_t t = 0; t < k; ++t) s[nb[t].index] -= 1.0;
  }
  return s;
}

double auc_pair_count(std::span<const double> scores, std::span<const int> labels) {
  double wins = 0.0;
  std::size_t n_pos = 0, n_neg = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == 1) {
      ++n_pos;
    } else {
      ++n_neg;
    }
  }
  if (n_pos == 0 || n_neg == 0) throw std::invalid_argument("pair AUC: one class");
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  return wins / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double quantile_direct(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  if (n == 0) throw std::invalid_argument("quantile of empty vector");
  const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, n - 1);
  return values[lo] + (pos - std::floor(pos)) * (values[hi] - values[lo]);
}

std::vector<double> pca_direct(const Matrix& x, double variance_threshold) {
  const std::size_t n = x.rows(), d = x.cols();
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) mean[j] += x.at(i, j);
  }
  for (double& m : mean) m /= static_cast<double>(n);

  // covariance
  std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < d; ++a) {
      const double da = x.at(i, a) - mean[a];
      for (std::size_t b = 0; b < d; ++b) {
        cov[a][b] += da * (x.at(i, b) - mean[b]);
      }
    }
  }
  for (auto& row : cov) {
    for (double& v : row) v /= static_cast<double>(n - 1);
  }

  // cyclic Jacobi rotations
  std::vector<std::vector<double>> vec(d, std::vector<double>(d, 0.0));
  for (std::size_t j = 0; j < d; ++j) vec[j][j] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) off += cov[p][q] * cov[p][q];
    }
    if (off < 1e-22) break;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        if (std::abs(cov[p][q]) < 1e-300) continue;
        const double theta = (cov[q][q] - cov[p][p]) / (2.0 * cov[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t j = 0; j < d; ++j) {
          const double cpj = cov[p][j], cqj = cov[q][j];
          cov[p][j] = c * cpj - s * cqj;
          cov[q][j] = s * cpj + c * cqj;
        }
        for (std::size_t j = 0; j < d; ++j) {
          const double cjp = cov[j][p], cjq = cov[j][q];
          cov[j][p] = c * cjp - s * cjq;
          cov[j][q] = s * cjp + c * cjq;
        }
        for (std::size_t j = 0; j < d; ++j) {
          const double vjp = vec[j][p], vjq = vec[j][q];
          vec[j][p] = c * vjp - s * vjq;
          vec[j][q] = s * vjp + c * vjq;
        }
      }
    }
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cov[a][a] > cov[b][b];
  });
  double total = 0.0;
  for (std::size_t j = 0; j < d; ++j) total += std::max(cov[j][j], 0.0);

  std::vector<std::size_t> retained;
  double cum = 0.0;
  for (std::size_t j : order) {
    if (cov[j][j] <= 1e-12) break;
    retained.push_back(j);
    cum += cov[j][j];
    if (cum / total > variance_threshold) break;
  }

  std::vector<double> s(n, 0.0);
  for (std::size_t j : retained) {
    for (std::size_t i = 0; i < n; ++i) {
      double proj = 0.0;
      for (std::size_t a = 0; a < d; ++a) proj += (x.at(i, a) - mean[a]) * vec[a][j];
      s[i] += proj * proj / cov[j][j];
    }
  }
  return s;
}

std::vector<double> kde_direct(const Matrix& x) {
  const std::size_t n = x.rows(), d = x.cols();
  std::vector<double> h(d);
  const double factor =
      std::pow(static_cast<double>(n), -1.0 / (static_cast<double>(d) + 4.0));
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x.at(i, j);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ss += (x.at(i, j) - mean) * (x.at(i, j) - mean);
    }
    h[j] = std::sqrt(ss / static_cast<double>(n - 1)) * factor;
  }
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    double density = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
      if (q == i) continue;
      double kernel = 1.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double u = (x.at(i, j) - x.at(q, j)) / h[j];
        kernel *= std::exp(-0.5 * u * u) / (h[j] * std::sqrt(2.0 * std::numbers::pi));
      }
      density += kernel;
    }
    density /= static_cast<double>(n - 1);
    s[i] = -std::log(density);
  }
  return s;
}

Dendrogram upgma_naive(const Matrix& dist) {
  const std::size_t n = dist.rows();
  struct Cluster {
    std::size_t node;
    std::vector<std::size_t> leaves;  // sorted; front() is the representative
  };
  std::vector<Cluster> clusters;
  for (std::size_t i = 0; i < n; ++i) clusters.push_back({i, {i}});

  Dendrogram dend;
  dend.n_leaves = n;
  for (std::size_t step = 0; step + 1 < n; ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 1, best_ra = 0, best_rb = 0;
    bool have = false;
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        double sum = 0.0;
        for (std::size_t u : clusters[a].leaves) {
          for (std::size_t v : clusters[b].leaves) sum += dist.at(u, v);
        }
        const double avg = sum / static_cast<double>(clusters[a].leaves.size() *
                                                     clusters[b].leaves.size());
        std::size_t ca = a, cb = b;
        if (clusters[ca].leaves.front() > clusters[cb].leaves.front()) std::swap(ca, cb);
        const std::size_t ra = clusters[ca].leaves.front();
        const std::size_t rb = clusters[cb].leaves.front();
        const bool better =
            !have || avg < best ||
            (avg == best && (ra < best_ra || (ra == best_ra && rb < best_rb)));
        if (better) {
          have = true;
          best = avg;
          bi = ca;
          bj = cb;
          best_ra = ra;
          best_rb = rb;
        }
      }
    }
    dend.merges.push_back({clusters[bi].node, clusters[bj].node, best,
                           clusters[bi].leaves.size() + clusters[bj].leaves.size()});
    Cluster merged;
    merged.node = n + step;
    merged.leaves = clusters[bi].leaves;
    merged.leaves.insert(merged.leaves.end(), clusters[bj].leaves.begin(),
                         clusters[bj].leaves.end());
    std::sort(merged.leaves.begin(), merged.leaves.end());
    const std::size_t hi_idx = std::max(bi, bj), lo_idx = std::min(bi, bj);
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(hi_idx));
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(lo_idx));
    clusters.push_back(std::move(merged));
  }
  return dend;
}

namespace {

// each internal node owns a fixed flip bit (its merge index)
void collect_order(const Dendrogram& dend, std::size_t node, unsigned flips,
                   std::vector<std::size_t>& out) {
  if (node < dend.n_leaves) {
    out.push_back(node);
    return;
  }
  const auto& m = dend.merges[node - dend.n_leaves];
  const bool flip = (flips >> (node - dend.n_leaves)) & 1u;
  collect_order(dend, flip ? m.b : m.a, flips, out);
  collect_order(dend, flip ? m.a : m.b, flips, out);
}

}  // namespace

double leaf_order_exhaustive(const Dendrogram& dend, const Matrix& dist) {
  const std::size_t n = dend.n_leaves;
  const std::size_t internal = dend.merges.size();
  double best = std::numeric_limits<double>::infinity();
  for (unsigned flips = 0; flips < (1u << internal); ++flips) {
    std::vector<std::size_t> order;
    collect_order(dend, n + internal - 1, flips, order);
    double cost = 0.0;
    for (std::size_t t = 0; t + 1 < order.size(); ++t) {
      cost += dist.at(order[t], order[t + 1]);
    }
    best = std::min(best, cost);
  }
  return best;
}

std::vector<double> friedman_mean_ranks_direct(const AucMatrix& m) {
  const std::size_t k = m.algorithms.size(), nd = m.datasets.size();
  std::vector<double> mean(k, 0.0);
  for (std::size_t j = 0; j < nd; ++j) {
    for (std::size_t a = 0; a < k; ++a) {
      // rank = 1 + count(better) + count(equal before or after)/2
      double better = 0.0, equal = 0.0;
      for (std::size_t b = 0; b < k; ++b) {
        if (b == a) continue;
        if (m.values.at(b, j) > m.values.at(a, j)) better += 1.0;
        if (m.values.at(b, j) == m.values.at(a, j)) equal += 1.0;
      }
      mean[a] += 1.0 + better + equal / 2.0;
    }
  }
  for (double& v : mean) v /= static_cast<double>(nd);
  return mean;
}

double harmonic_direct(std::size_t n) {
  double h = 0.0;
  for (std::size_t i = 1; i <= n; ++i) h += 1.0 / static_cast<double>(i);
  return h;
}

}  // namespace odbench::ref
