#include "odbench/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace odbench {

namespace {

constexpr std::size_t kMaxTreeDim = 16;  // brute force beats pruning above this
constexpr std::size_t kLeafSize = 16;

// (distance^2, index) candidate ordering; lower index wins ties.
struct Candidate {
  double d2;
  std::size_t index;
  bool operator<(const Candidate& o) const {
    return d2 < o.d2 || (d2 == o.d2 && index < o.index);
  }
};

// Bounded worst-first heap of the k best candidates seen so far.
class CandidateHeap {
 public:
  explicit CandidateHeap(std::size_t k) : k_(k) { heap_.reserve(k + 1); }

  double worst_d2() const { return heap_.size() < k_ ? kInf : heap_.front().d2; }
  bool full() const { return heap_.size() == k_; }

  void offer(Candidate c) {
    if (heap_.size() < k_) {
      heap_.push_back(c);
      std::push_heap(heap_.begin(), heap_.end(), less_);
    } else if (less_(c, heap_.front())) {
      std::pop_heap(heap_.begin(), heap_.end(), less_);
      heap_.back() = c;
      std::push_heap(heap_.begin(), heap_.end(), less_);
    }
  }

  std::vector<Candidate> sorted_ascending() {
    std::sort(heap_.begin(), heap_.end());
    return std::move(heap_);
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  // max-heap on (d2, index) so the worst candidate sits on top
  struct {
    bool operator()(const Candidate& a, const Candidate& b) const { return a < b; }
  } less_;
  std::size_t k_;
  std::vector<Candidate> heap_;
};

class KdTree {
 public:
  KdTree(const Matrix& x) : x_(x), indices_(x.rows()) {
    std::iota(indices_.begin(), indices_.end(), std::size_t{0});
    nodes_.reserve(2 * x.rows() / kLeafSize + 2);
    root_ = build(0, x.rows());
  }

  void query(std::size_t qi, CandidateHeap& heap) const { search(root_, qi, heap); }

 private:
  struct Node {
    std::size_t split_dim = 0;
    double split_val = 0.0;
    int left = -1, right = -1;
    std::size_t begin = 0, end = 0;  // leaf range into indices_
    bool leaf = false;
  };

  int build(std::size_t begin, std::size_t end) {
    Node node;
    if (end - begin <= kLeafSize) {
      node.leaf = true;
      node.begin = begin;
      node.end = end;
      nodes_.push_back(node);
      return static_cast<int>(nodes_.size() - 1);
    }
    // split on the widest dimension at the median point
    std::size_t dim = 0;
    double best_spread = -1.0;
    for (std::size_t j = 0; j < x_.cols(); ++j) {
      double lo = x_.at(indices_[begin], j), hi = lo;
      for (std::size_t t = begin + 1; t < end; ++t) {
        const double v = x_.at(indices_[t], j);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi - lo > best_spread) {
        best_spread = hi - lo;
        dim = j;
      }
    }
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(indices_.begin() + begin, indices_.begin() + mid,
                     indices_.begin() + end, [&](std::size_t a, std::size_t b) {
                       return x_.at(a, dim) < x_.at(b, dim);
                     });
    node.split_dim = dim;
    node.split_val = x_.at(indices_[mid], dim);
    nodes_.push_back(node);
    const int id = static_cast<int>(nodes_.size() - 1);
    const int l = build(begin, mid);
    const int r = build(mid, end);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  void search(int id, std::size_t qi, CandidateHeap& heap) const {
    const Node& node = nodes_[id];
    const auto q = x_.row(qi);
    if (node.leaf) {
      for (std::size_t t = node.begin; t < node.end; ++t) {
        const std::size_t j = indices_[t];
        if (j == qi) continue;
        heap.offer({squared_distance(q, x_.row(j)), j});
      }
      return;
    }
    const double diff = q[node.split_dim] - node.split_val;
    const int near = diff < 0.0 ? node.left : node.right;
    const int far = diff < 0.0 ? node.right : node.left;
    search(near, qi, heap);
    // visit the far side unless strictly farther than the current worst;
    // equal distances must still be inspected so index ties stay exact
    if (diff * diff <= heap.worst_d2()) search(far, qi, heap);
  }

  const Matrix& x_;
  std::vector<std::size_t> indices_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace

NeighborTable build_neighbor_table(const Matrix& x, std::size_t k_max) {
  const std::size_t n = x.rows();
  if (n < 2) throw std::invalid_argument("neighbor table: need at least 2 samples");
  if (k_max < 1 || k_max >= n) {
    throw std::invalid_argument("neighbor table: k_max must be in [1, n-1]");
  }

  std::vector<Neighbor> flat(n * k_max);
  if (x.cols() <= kMaxTreeDim) {
    KdTree tree(x);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t i = 0; i < n; ++i) {
      CandidateHeap heap(k_max);
      tree.query(i, heap);
      auto best = heap.sorted_ascending();
      for (std::size_t t = 0; t < k_max; ++t) {
        flat[i * k_max + t] = {best[t].index, std::sqrt(best[t].d2)};
      }
    }
  } else {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::size_t i = 0; i < n; ++i) {
      CandidateHeap heap(k_max);
      const auto q = x.row(i);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        heap.offer({squared_distance(q, x.row(j)), j});
      }
      auto best = heap.sorted_ascending();
      for (std::size_t t = 0; t < k_max; ++t) {
        flat[i * k_max + t] = {best[t].index, std::sqrt(best[t].d2)};
      }
    }
  }
  return NeighborTable(n, k_max, std::move(flat));
}

std::vector<Neighbor> neighborhood_with_ties(const NeighborTable& table,
                                             const Matrix& x, std::size_t i,
                                             std::size_t k) {
  const auto row = table.row(i);
  if (k < 1 || k > row.size()) {
    throw std::invalid_argument("neighborhood_with_ties: k out of range");
  }
  const double kdist = row[k - 1].distance;
  std::size_t count = k;
  while (count < row.size() && row[count].distance <= kdist) ++count;

  if (count == row.size() && row.size() < table.size() - 1) {
    // tie run may extend past the stored row; rescan this sample
    std::vector<Neighbor> full;
    const auto q = x.row(i);
    for (std::size_t j = 0; j < x.rows(); ++j) {
      if (j == i) continue;
      const double dist = euclidean_distance(q, x.row(j));
      if (dist <= kdist) full.push_back({j, dist});
    }
    std::sort(full.begin(), full.end(), [](const Neighbor& a, const Neighbor& b) {
      return a.distance < b.distance ||
             (a.distance == b.distance && a.index < b.index);
    });
    return full;
  }
  return {row.begin(), row.begin() + count};
}

}  // namespace odbench
