#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "odbench/clustermap.hpp"
#include "odbench/io.hpp"
#include "odbench/rng.hpp"
#include "reference/reference.hpp"

using namespace odbench;

namespace {

Matrix random_rows(std::size_t n, std::size_t d, Rng& rng) {
  Matrix x(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) x.at(i, j) = rng.next_normal();
  }
  return x;
}

double order_cost(const std::vector<std::size_t>& order, const Matrix& dist) {
  double cost = 0.0;
  for (std::size_t t = 0; t + 1 < order.size(); ++t) {
    cost += dist.at(order[t], order[t + 1]);
  }
  return cost;
}

Matrix distance_from_points(const std::vector<double>& pts) {
  Matrix d(pts.size(), pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      d.at(i, j) = std::abs(pts[i] - pts[j]);
    }
  }
  return d;
}

}  // namespace

TEST_CASE("pearson distance: identical, scaled and negated rows") {
  Matrix rows(3, 6);
  Rng rng(1);
  for (std::size_t j = 0; j < 6; ++j) {
    const double v = rng.next_normal();
    rows.at(0, j) = v;
    rows.at(1, j) = 3.0 * v + 2.0;  // same correlation
    rows.at(2, j) = -v;
  }
  const Matrix d = pearson_distance_matrix(rows);
  CHECK(d.at(0, 0) == 0.0);
  CHECK(d.at(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(d.at(0, 2) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("pearson distance matches the covariance-formula oracle") {
  Rng rng(2);
  const Matrix rows = random_rows(6, 10, rng);
  const Matrix d = pearson_distance_matrix(rows);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      // direct covariance formula
      double mi = 0, mj = 0;
      for (std::size_t t = 0; t < 10; ++t) {
        mi += rows.at(i, t);
        mj += rows.at(j, t);
      }
      mi /= 10;
      mj /= 10;
      double num = 0, di = 0, dj = 0;
      for (std::size_t t = 0; t < 10; ++t) {
        num += (rows.at(i, t) - mi) * (rows.at(j, t) - mj);
        di += (rows.at(i, t) - mi) * (rows.at(i, t) - mi);
        dj += (rows.at(j, t) - mj) * (rows.at(j, t) - mj);
      }
      const double want = 1.0 - num / std::sqrt(di * dj);
      CHECK(d.at(i, j) == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("zero-variance row is rejected by name") {
  Matrix rows(2, 4);
  for (std::size_t j = 0; j < 4; ++j) {
    rows.at(0, j) = 1.0;
    rows.at(1, j) = static_cast<double>(j);
  }
  CHECK_THROWS_WITH_AS(pearson_distance_matrix(rows), doctest::Contains("row 0"),
                       std::invalid_argument);
}

TEST_CASE("three-point UPGMA merges the close pair first") {
  Matrix d(3, 3);
  d.at(0, 1) = d.at(1, 0) = 1.0;
  d.at(0, 2) = d.at(2, 0) = 5.0;
  d.at(1, 2) = d.at(2, 1) = 5.0;
  const Dendrogram dend = average_linkage(d);
  REQUIRE(dend.merges.size() == 2);
  CHECK(dend.merges[0].a == 0);
  CHECK(dend.merges[0].b == 1);
  CHECK(dend.merges[0].height == doctest::Approx(1.0));
  CHECK(dend.merges[1].height == doctest::Approx(5.0));
}

TEST_CASE("equal distances give equal merge heights") {
  Matrix d(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) d.at(i, j) = i == j ? 0.0 : 2.0;
  }
  const Dendrogram dend = average_linkage(d);
  for (const auto& m : dend.merges) CHECK(m.height == doctest::Approx(2.0));
}

TEST_CASE("UPGMA equals the naive recomputation oracle on random instances") {
  Rng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 8;
    const Matrix rows = random_rows(n, 12, rng);
    const Matrix dist = pearson_distance_matrix(rows);
    const Dendrogram fast = average_linkage(dist);
    const Dendrogram naive = ref::upgma_naive(dist);
    REQUIRE(fast.merges.size() == naive.merges.size());
    for (std::size_t t = 0; t < fast.merges.size(); ++t) {
      CHECK(fast.merges[t].height == doctest::Approx(naive.merges[t].height).epsilon(1e-12));
      CHECK(fast.merges[t].size == naive.merges[t].size);
      CHECK(fast.merges[t].a == naive.merges[t].a);
      CHECK(fast.merges[t].b == naive.merges[t].b);
    }
  }
}

TEST_CASE("merge heights never decrease toward the root") {
  Rng rng(12);
  const Matrix rows = random_rows(20, 8, rng);
  const Dendrogram dend = average_linkage(pearson_distance_matrix(rows));
  for (std::size_t t = 1; t < dend.merges.size(); ++t) {
    CHECK(dend.merges[t].height >= dend.merges[t - 1].height - 1e-12);
  }
}

TEST_CASE("two planted correlation blocks split at the top cut") {
  Rng rng(13);
  Matrix rows(10, 30);
  std::vector<double> sig_a(30), sig_b(30);
  for (std::size_t t = 0; t < 30; ++t) {
    sig_a[t] = rng.next_normal();
    sig_b[t] = rng.next_normal();
  }
  for (std::size_t i = 0; i < 10; ++i) {
    const auto& sig = i < 5 ? sig_a : sig_b;
    for (std::size_t t = 0; t < 30; ++t) {
      rows.at(i, t) = sig[t] + 0.05 * rng.next_normal();
    }
  }
  const Dendrogram dend = average_linkage(pearson_distance_matrix(rows));
  const auto [left, right] = two_cluster_cut(dend);
  const std::set<std::size_t> ls(left.begin(), left.end());
  const std::set<std::size_t> want_a{0, 1, 2, 3, 4}, want_b{5, 6, 7, 8, 9};
  CHECK((ls == want_a || ls == want_b));
  CHECK(left.size() + right.size() == 10);
}

TEST_CASE("clustering ignores positive row scaling and shifts") {
  Rng rng(14);
  const Matrix rows = random_rows(9, 15, rng);
  Matrix warped = rows;
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    const double scale = 0.5 + 2.0 * rng.next_double();
    const double shift = rng.next_normal() * 4.0;
    for (std::size_t t = 0; t < rows.cols(); ++t) {
      warped.at(i, t) = scale * rows.at(i, t) + shift;
    }
  }
  const Dendrogram a = average_linkage(pearson_distance_matrix(rows));
  const Dendrogram b = average_linkage(pearson_distance_matrix(warped));
  REQUIRE(a.merges.size() == b.merges.size());
  for (std::size_t t = 0; t < a.merges.size(); ++t) {
    CHECK(a.merges[t].a == b.merges[t].a);
    CHECK(a.merges[t].b == b.merges[t].b);
  }
}

TEST_CASE("two leaves order lexicographically") {
  Matrix d(2, 2);
  d.at(0, 1) = d.at(1, 0) = 1.0;
  const Dendrogram dend = average_linkage(d);
  const auto order = optimal_leaf_order(dend, d);
  CHECK(order == std::vector<std::size_t>{0, 1});
}

TEST_CASE("leaf ordering reaches the exhaustive-flip minimum") {
  Rng rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4 + rng.next_below(5);  // up to 8 leaves
    Matrix dist(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double v = rng.next_double() + 0.01;
        dist.at(i, j) = v;
        dist.at(j, i) = v;
      }
    }
    const Dendrogram dend = average_linkage(dist);
    const auto order = optimal_leaf_order(dend, dist);

    // result is a permutation
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i) REQUIRE(sorted[i] == i);

    CHECK(order_cost(order, dist) ==
          doctest::Approx(ref::leaf_order_exhaustive(dend, dist)).epsilon(1e-9));
  }
}

TEST_CASE("leaf ordering only flips subtrees") {
  // 1D points whose dendrogram structure is unambiguous
  const std::vector<double> pts{0.0, 0.1, 1.0, 1.1, 5.0};
  const Matrix dist = distance_from_points(pts);
  const Dendrogram dend = average_linkage(dist);
  const auto order = optimal_leaf_order(dend, dist);
  // every subtree's leaves stay contiguous in the final order
  for (std::size_t t = 0; t < dend.merges.size(); ++t) {
    const auto leaves = dend.leaves_under(dend.n_leaves + t);
    std::vector<std::size_t> positions;
    for (std::size_t leaf : leaves) {
      positions.push_back(static_cast<std::size_t>(
          std::find(order.begin(), order.end(), leaf) - order.begin()));
    }
    std::sort(positions.begin(), positions.end());
    CHECK(positions.back() - positions.front() + 1 == positions.size());
  }
}

TEST_CASE("fixture matrix: the local datasets cluster together") {
  const AucMatrix m =
      read_auc_matrix_csv(std::string(ODBENCH_FIXTURE_DIR) + "/auc_fixture.csv");
  Matrix by_dataset(m.datasets.size(), m.algorithms.size());
  for (std::size_t i = 0; i < m.algorithms.size(); ++i) {
    for (std::size_t j = 0; j < m.datasets.size(); ++j) {
      by_dataset.at(j, i) = m.values.at(i, j);
    }
  }
  const Matrix dist = pearson_distance_matrix(by_dataset);
  const Dendrogram dend = average_linkage(dist);
  const auto [left, right] = two_cluster_cut(dend);

  const std::vector<std::string> local = {
      "aloi",   "donors",    "fault",  "glass",     "ionosphere", "landsat",
      "letter", "nasa",      "parkinson", "pen-local", "vowels",  "wilt"};
  const std::set<std::size_t> ls(left.begin(), left.end());
  std::size_t in_left = 0;
  for (const auto& name : local) {
    in_left += ls.count(m.dataset_index(name));
  }
  const std::size_t together = std::max(in_left, local.size() - in_left);
  CHECK(together >= 10);

  const bool pen_local_left = ls.count(m.dataset_index("pen-local")) > 0;
  const bool pen_global_left = ls.count(m.dataset_index("pen-global")) > 0;
  CHECK(pen_local_left != pen_global_left);
}
