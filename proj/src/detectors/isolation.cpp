#include "odbench/detectors/isolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "odbench/rng.hpp"

namespace odbench {

namespace {

std::size_t height_limit(std::size_t psi) {
  return static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(std::max<std::size_t>(psi, 2)))));
}

// ---- axis-parallel isolation tree ----

struct IfNode {
  std::size_t split_dim = 0;
  double split_val = 0.0;
  int left = -1, right = -1;
  double leaf_adjust = 0.0;  // depth + c(size) precomputed at the leaf
};

class IfTree {
 public:
  IfTree(const Matrix& x, std::vector<std::size_t> sample, std::size_t max_depth, Rng& rng)
      : x_(x) {
    nodes_.reserve(2 * sample.size());
    build(std::move(sample), 0, max_depth, rng);
  }

  double path_length(std::span<const double> p) const {
    int id = 0;
    while (nodes_[id].left >= 0) {
      id = p[nodes_[id].split_dim] < nodes_[id].split_val ? nodes_[id].left
                                                          : nodes_[id].right;
    }
    return nodes_[id].leaf_adjust;
  }

 private:
  int build(std::vector<std::size_t> idx, std::size_t depth, std::size_t max_depth,
            Rng& rng) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    if (idx.size() <= 1 || depth >= max_depth) {
      nodes_[id].leaf_adjust =
          static_cast<double>(depth) + path_length_norm(idx.size());
      return id;
    }
    // pick a dimension that actually varies within this node
    const std::size_t d = x_.cols();
    std::size_t dim = 0;
    double lo = 0.0, hi = 0.0;
    bool found = false;
    for (std::size_t attempt = 0; attempt < 4 * d && !found; ++attempt) {
      dim = static_cast<std::size_t>(rng.next_below(d));
      lo = hi = x_.at(idx[0], dim);
      for (std::size_t t = 1; t < idx.size(); ++t) {
        const double v = x_.at(idx[t], dim);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      found = hi > lo;
    }
    if (!found) {
      for (dim = 0; dim < d; ++dim) {
        lo = hi = x_.at(idx[0], dim);
        for (std::size_t t = 1; t < idx.size(); ++t) {
          const double v = x_.at(idx[t], dim);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        if (hi > lo) {
          found = true;
          break;
        }
      }
    }
    if (!found) {  // identical rows cannot be separated
      nodes_[id].leaf_adjust =
          static_cast<double>(depth) + path_length_norm(idx.size());
      return id;
    }

    const double split = lo + rng.next_double() * (hi - lo);
    std::vector<std::size_t> left_idx, right_idx;
    left_idx.reserve(idx.size());
    right_idx.reserve(idx.size());
    for (std::size_t t : idx) {
      (x_.at(t, dim) < split ? left_idx : right_idx).push_back(t);
    }
    if (left_idx.empty() || right_idx.empty()) {  // degenerate draw at the boundary
      nodes_[id].leaf_adjust =
          static_cast<double>(depth) + path_length_norm(idx.size());
      return id;
    }
    nodes_[id].split_dim = dim;
    nodes_[id].split_val = split;
    const int l = build(std::move(left_idx), depth + 1, max_depth, rng);
    const int r = build(std::move(right_idx), depth + 1, max_depth, rng);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  const Matrix& x_;
  std::vector<IfNode> nodes_;
};

// ---- hyperplane isolation tree ----

struct EifNode {
  std::vector<std::size_t> dims;    // non-zero normal components
  std::vector<double> coeffs;
  double offset = 0.0;              // dot(normal, intercept point)
  int left = -1, right = -1;
  double leaf_adjust = 0.0;
};

class EifTree {
 public:
  EifTree(const Matrix& x, std::vector<std::size_t> sample, std::size_t max_depth,
          std::size_t non_zero, Rng& rng)
      : x_(x), non_zero_(std::min(non_zero, x.cols())) {
    nodes_.reserve(2 * sample.size());
    build(std::move(sample), 0, max_depth, rng);
  }

  double path_length(std::span<const double> p) const {
    int id = 0;
    while (nodes_[id].left >= 0) {
      const EifNode& node = nodes_[id];
      double proj = -node.offset;
      for (std::size_t t = 0; t < node.dims.size(); ++t) {
        proj += node.coeffs[t] * p[node.dims[t]];
      }
      id = proj <= 0.0 ? node.left : node.right;
    }
    return nodes_[id].leaf_adjust;
  }

 private:
  int build(std::vector<std::size_t> idx, std::size_t depth, std::size_t max_depth,
            Rng& rng) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    if (idx.size() <= 1 || depth >= max_depth) {
      nodes_[id].leaf_adjust =
          static_cast<double>(depth) + path_length_norm(idx.size());
      return id;
    }

    const std::size_t d = x_.cols();
    std::vector<std::size_t> dims = sample_without_replacement(d, non_zero_, rng);
    std::sort(dims.begin(), dims.end());
    std::vector<double> coeffs(dims.size());
    for (double& c : coeffs) c = rng.next_normal();

    // intercept drawn inside this node's bounding box
    double offset = 0.0;
    for (std::size_t t = 0; t < dims.size(); ++t) {
      double lo = x_.at(idx[0], dims[t]), hi = lo;
      for (std::size_t u = 1; u < idx.size(); ++u) {
        const double v = x_.at(idx[u], dims[t]);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      offset += coeffs[t] * (lo + rng.next_double() * (hi - lo));
    }

    std::vector<std::size_t> left_idx, right_idx;
    left_idx.reserve(idx.size());
    right_idx.reserve(idx.size());
    for (std::size_t u : idx) {
      double proj = -offset;
      for (std::size_t t = 0; t < dims.size(); ++t) {
        proj += coeffs[t] * x_.at(u, dims[t]);
      }
      (proj <= 0.0 ? left_idx : right_idx).push_back(u);
    }
    if (left_idx.empty() || right_idx.empty()) {
      nodes_[id].leaf_adjust =
          static_cast<double>(depth) + path_length_norm(idx.size());
      return id;
    }
    nodes_[id].dims = std::move(dims);
    nodes_[id].coeffs = std::move(coeffs);
    nodes_[id].offset = offset;
    const int l = build(std::move(left_idx), depth + 1, max_depth, rng);
    const int r = build(std::move(right_idx), depth + 1, max_depth, rng);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  const Matrix& x_;
  std::size_t non_zero_;
  std::vector<EifNode> nodes_;
};

template <typename Tree>
ScoreVector forest_scores(const Matrix& x,
                          const std::vector<std::unique_ptr<Tree>>& trees,
                          std::size_t psi) {
  const std::size_t n = x.rows();
  const double norm = path_length_norm(psi);
  std::vector<double> s(n);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = x.row(i);
    // Kahan sum in fixed tree order, so the mean is schedule-independent
    double sum = 0.0, comp = 0.0;
    for (const auto& tree : trees) {
      const double y = tree->path_length(p) - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    const double mean_path = sum / static_cast<double>(trees.size());
    s[i] = std::exp2(-mean_path / norm);
  }
  return ScoreVector(std::move(s));
}

}  // namespace

double path_length_norm(std::size_t m) {
  if (m <= 1) return 0.0;
  if (m == 2) return 1.0;
  double harmonic = 0.0;
  for (std::size_t i = 1; i + 1 <= m; ++i) harmonic += 1.0 / static_cast<double>(i);
  const double dm = static_cast<double>(m);
  return 2.0 * harmonic - 2.0 * (dm - 1.0) / dm;
}

ScoreVector if_score(const Matrix& x, const IsolationParams& params) {
  const std::size_t n = x.rows();
  const std::size_t psi = std::min(params.subsample, n);
  const std::size_t max_depth = height_limit(psi);

  std::vector<std::unique_ptr<IfTree>> trees(params.n_trees);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t t = 0; t < params.n_trees; ++t) {
    Rng rng(mix_seed(params.seed, t));
    trees[t] = std::make_unique<IfTree>(x, sample_without_replacement(n, psi, rng),
                                        max_depth, rng);
  }
  return forest_scores(x, trees, psi);
}

ScoreVector eif_score(const Matrix& x, const IsolationParams& params) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  const std::size_t psi = std::min(params.subsample, n);
  const std::size_t max_depth = height_limit(psi);
  const std::size_t ext = std::min(params.extension_level, d - 1);

  std::vector<std::unique_ptr<EifTree>> trees(params.n_trees);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t t = 0; t < params.n_trees; ++t) {
    Rng rng(mix_seed(params.seed, t));
    trees[t] = std::make_unique<EifTree>(x, sample_without_replacement(n, psi, rng),
                                         max_depth, ext + 1, rng);
  }
  return forest_scores(x, trees, psi);
}

ScoreVector inne_score(const Matrix& x, const IsolationParams& params) {
  const std::size_t n = x.rows();
  const std::size_t psi = std::min(params.inne_subsample, n);
  if (psi < 2) throw std::invalid_argument("INNE: need subsample of at least 2");

  struct Estimator {
    std::vector<std::size_t> centers;
    std::vector<double> radius;      // distance to nearest within-sample neighbor
    std::vector<double> nn_radius;   // radius of that neighbor's own sphere
  };
  std::vector<Estimator> ests(params.n_estimators);

#pragma omp parallel for schedule(dynamic, 8)
  for (std::size_t e = 0; e < params.n_estimators; ++e) {
    Rng rng(mix_seed(mix_seed(params.seed, 0x494E4E45ULL), e));
    Estimator est;
    est.centers = sample_without_replacement(n, psi, rng);
    est.radius.resize(psi);
    std::vector<std::size_t> nn(psi);
    for (std::size_t a = 0; a < psi; ++a) {
      double best = 0.0;
      std::size_t best_b = psi;
      for (std::size_t b = 0; b < psi; ++b) {
        if (b == a) continue;
        const double dist =
            euclidean_distance(x.row(est.centers[a]), x.row(est.centers[b]));
        if (best_b == psi || dist < best ||
            (dist == best && est.centers[b] < est.centers[best_b])) {
          best = dist;
          best_b = b;
        }
      }
      est.radius[a] = best;
      nn[a] = best_b;
    }
    est.nn_radius.resize(psi);
    for (std::size_t a = 0; a < psi; ++a) est.nn_radius[a] = est.radius[nn[a]];
    ests[e] = std::move(est);
  }

  std::vector<double> s(n);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = x.row(i);
    double sum = 0.0;
    for (const Estimator& est : ests) {
      // smallest covering sphere; ties go to the lower sample index
      std::size_t pick = psi;
      for (std::size_t a = 0; a < psi; ++a) {
        const double dist = euclidean_distance(p, x.row(est.centers[a]));
        if (dist > est.radius[a]) continue;
        if (pick == psi || est.radius[a] < est.radius[pick] ||
            (est.radius[a] == est.radius[pick] &&
             est.centers[a] < est.centers[pick])) {
          pick = a;
        }
      }
      if (pick == psi) {
        sum += 1.0;
      } else if (est.radius[pick] > 0.0) {
        sum += 1.0 - est.nn_radius[pick] / est.radius[pick];
      }
      // a zero-radius sphere (duplicate centers) isolates nothing
    }
    s[i] = sum / static_cast<double>(ests.size());
  }
  return ScoreVector(std::move(s));
}

}  // namespace odbench
