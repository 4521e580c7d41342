#include <algorithm>

#include "doctest.h"
#include "odbench/neighbors.hpp"
#include "odbench/rng.hpp"
#include "reference/reference.hpp"

using namespace odbench;

namespace {

Matrix random_points(std::size_t n, std::size_t d, Rng& rng) {
  Matrix x(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) x.at(i, j) = rng.next_normal();
  }
  return x;
}

void check_equals_brute_force(const Matrix& x, std::size_t k_max) {
  const auto table = build_neighbor_table(x, k_max);
  const auto brute = ref::brute_force_neighbors(x, k_max);
  REQUIRE(table.size() == x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto row = table.row(i);
    REQUIRE(row.size() == brute[i].size());
    for (std::size_t t = 0; t < row.size(); ++t) {
      CHECK(row[t].index == brute[i][t].index);
      CHECK(row[t].distance == brute[i][t].distance);  // bitwise
    }
  }
}

}  // namespace

TEST_CASE("1D line example: nearest neighbors and distances") {
  const Matrix x(4, 1, {0, 1, 2, 10});
  const auto table = build_neighbor_table(x, 2);
  CHECK(table.row(0)[0].index == 1);
  CHECK(table.row(0)[0].distance == doctest::Approx(1.0));
  CHECK(table.row(0)[1].index == 2);
  CHECK(table.row(0)[1].distance == doctest::Approx(2.0));
  CHECK(table.row(3)[0].index == 2);
  CHECK(table.row(3)[0].distance == doctest::Approx(8.0));
  CHECK(table.row(3)[1].index == 1);
  CHECK(table.row(3)[1].distance == doctest::Approx(9.0));
}

TEST_CASE("equidistant neighbors list the lower index first") {
  // point 0 at origin; 1 and 2 both at distance 1
  const Matrix x(3, 2, {0, 0, 1, 0, 0, 1});
  const auto table = build_neighbor_table(x, 2);
  CHECK(table.row(0)[0].index == 1);
  CHECK(table.row(0)[1].index == 2);
}

TEST_CASE("k_max bounds are enforced") {
  const Matrix x(4, 1, {0, 1, 2, 3});
  CHECK_THROWS_AS(build_neighbor_table(x, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_neighbor_table(x, 0), std::invalid_argument);
}

TEST_CASE("tree search equals brute force on random data, ties included") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 10 + rng.next_below(491);
    const std::size_t d = 1 + rng.next_below(10);
    const Matrix x = random_points(n, d, rng);
    const std::size_t k_max = 1 + rng.next_below(std::min<std::size_t>(n - 1, 40));
    check_equals_brute_force(x, k_max);
  }
}

TEST_CASE("grid data with heavy distance ties matches brute force exactly") {
  // integer lattice points produce many exactly-equal distances
  Rng rng(5);
  Matrix x(100, 2);
  std::size_t t = 0;
  for (std::size_t a = 0; a < 10; ++a) {
    for (std::size_t b = 0; b < 10; ++b) {
      x.at(t, 0) = static_cast<double>(a);
      x.at(t, 1) = static_cast<double>(b);
      ++t;
    }
  }
  check_equals_brute_force(x, 12);
}

TEST_CASE("large random set equals brute force") {
  Rng rng(77);
  const Matrix x = random_points(1000, 3, rng);
  check_equals_brute_force(x, 10);
}

TEST_CASE("high-dimensional path (brute force backend) matches the oracle") {
  Rng rng(99);
  const Matrix x = random_points(120, 24, rng);
  check_equals_brute_force(x, 8);
}

TEST_CASE("mutual nearest neighbors see the same distance") {
  Rng rng(31);
  const Matrix x = random_points(60, 3, rng);
  const auto table = build_neighbor_table(x, 1);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto nb = table.row(i)[0];
    if (table.row(nb.index)[0].index == i) {
      CHECK(table.row(nb.index)[0].distance == nb.distance);
    }
  }
}

TEST_CASE("tie closure returns every point at the k-distance") {
  // four points at distance exactly 1 from the origin
  Matrix x(6, 2, {0, 0, 1, 0, -1, 0, 0, 1, 0, -1, 5, 5});
  const auto table = build_neighbor_table(x, 2);
  const auto hood = neighborhood_with_ties(table, x, 0, 2);
  REQUIRE(hood.size() == 4);  // rescan found the truncated ties
  for (const auto& nb : hood) CHECK(nb.distance == doctest::Approx(1.0));

  const auto table5 = build_neighbor_table(x, 5);
  const auto hood5 = neighborhood_with_ties(table5, x, 0, 2);
  CHECK(hood5.size() == 4);
}
