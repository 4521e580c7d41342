#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "doctest.h"
#include "odbench/detectors/isolation.hpp"
#include "odbench/detectors/proximity.hpp"
#include "odbench/rng.hpp"
#include "reference/reference.hpp"

using namespace odbench;

namespace {

Matrix gaussian_blob(std::size_t n, std::size_t d, Rng& rng, double sigma = 1.0) {
  Matrix x(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) x.at(i, j) = sigma * rng.next_normal();
  }
  return x;
}

std::size_t argmax(const ScoreVector& s) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] > s[best]) best = i;
  }
  return best;
}

double spearman(const ScoreVector& a, const ScoreVector& b) {
  const std::size_t n = a.size();
  const auto ranks = [n](const ScoreVector& s) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return s[x] < s[y]; });
    std::vector<double> r(n);
    for (std::size_t t = 0; t < n; ++t) r[order[t]] = static_cast<double>(t);
    return r;
  };
  const auto ra = ranks(a), rb = ranks(b);
  const double mean = (static_cast<double>(n) - 1.0) / 2.0;
  double num = 0.0, da = 0.0, db = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (ra[i] - mean) * (rb[i] - mean);
    da += (ra[i] - mean) * (ra[i] - mean);
    db += (rb[i] - mean) * (rb[i] - mean);
  }
  return num / std::sqrt(da * db);
}

}  // namespace

TEST_CASE("path length normalizer anchors") {
  CHECK(path_length_norm(2) == 1.0);
  CHECK(path_length_norm(1) == 0.0);
  CHECK(path_length_norm(0) == 0.0);
  // exact harmonic-sum oracle at m = 256
  const double expected = 2.0 * ref::harmonic_direct(255) - 2.0 * 255.0 / 256.0;
  CHECK(path_length_norm(256) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("two points isolate at depth 1, score exactly one half") {
  const Matrix x(2, 1, {0.0, 1.0});
  IsolationParams p;
  p.n_trees = 50;
  p.subsample = 2;
  p.seed = 4;
  const auto s = if_score(x, p);
  CHECK(s[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sampled tree indices are distinct") {
  Rng rng(17);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng.next_below(300);
    const std::size_t count = 1 + rng.next_below(n);
    const auto idx = sample_without_replacement(n, count, rng);
    const std::set<std::size_t> uniq(idx.begin(), idx.end());
    CHECK(uniq.size() == idx.size());
    for (std::size_t v : idx) CHECK(v < n);
  }
}

TEST_CASE("far singleton scores highest in at least 48 of 50 seeds") {
  std::size_t hits = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed + 1000);
    Matrix x = gaussian_blob(128, 2, rng, 0.5);
    x.at(0, 0) = 15.0;
    x.at(0, 1) = -14.0;
    IsolationParams p;
    p.n_trees = 100;
    p.subsample = 64;
    p.seed = seed;
    if (argmax(if_score(x, p)) == 0) ++hits;
  }
  CHECK(hits >= 48);
}

TEST_CASE("forest scores stay in (0, 1] and depend monotonically on centrality") {
  Rng rng(5);
  Matrix x = gaussian_blob(256, 3, rng);
  // plant one point near the centroid and one clearly farther out
  for (std::size_t j = 0; j < 3; ++j) {
    x.at(0, j) = 0.01;
    x.at(1, j) = 2.5;
  }
  double near_sum = 0.0, far_sum = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    IsolationParams p;
    p.n_trees = 64;
    p.subsample = 128;
    p.seed = seed;
    const auto s = if_score(x, p);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s[i] > 0.0);
      CHECK(s[i] <= 1.0);
    }
    near_sum += s[0];
    far_sum += s[1];
  }
  CHECK(far_sum > near_sum);
}

TEST_CASE("identical seed gives bit-identical scores at any thread count") {
  Rng rng(900);
  Matrix x = gaussian_blob(200, 4, rng);
  IsolationParams p;
  p.n_trees = 128;
  p.subsample = 64;
  p.seed = 31337;

  const auto baseline = if_score(x, p);
  const auto eif_baseline = eif_score(x, p);
  const auto inne_baseline = inne_score(x, p);
#ifdef _OPENMP
  const int saved = omp_get_max_threads();
  for (int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    const auto again = if_score(x, p);
    const auto eif_again = eif_score(x, p);
    const auto inne_again = inne_score(x, p);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      CHECK(again[i] == baseline[i]);
      CHECK(eif_again[i] == eif_baseline[i]);
      CHECK(inne_again[i] == inne_baseline[i]);
    }
  }
  omp_set_num_threads(saved);
#else
  const auto again = if_score(x, p);
  for (std::size_t i = 0; i < x.rows(); ++i) CHECK(again[i] == baseline[i]);
#endif
}

TEST_CASE("single-component hyperplane forest ranks like the axis forest") {
  double corr_sum = 0.0;
  int trials = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed + 50);
    Matrix x = gaussian_blob(300, 2, rng);
    x.at(0, 0) = 8.0;
    x.at(0, 1) = 8.0;
    IsolationParams p;
    p.n_trees = 300;
    p.subsample = 128;
    p.extension_level = 0;  // one non-zero component per split normal
    p.seed = seed;
    corr_sum += spearman(eif_score(x, p), if_score(x, p));
    ++trials;
  }
  CHECK(corr_sum / trials > 0.9);
}

TEST_CASE("extension level clamps to d-1 without error") {
  Rng rng(60);
  const Matrix x = gaussian_blob(100, 3, rng);
  IsolationParams p;
  p.n_trees = 20;
  p.subsample = 64;
  p.extension_level = 3;  // d = 3 forces a clamp to 2
  p.seed = 9;
  CHECK_NOTHROW(eif_score(x, p));
}

TEST_CASE("EIF separates the planted far point") {
  std::size_t hits = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed + 77);
    Matrix x = gaussian_blob(128, 3, rng, 0.5);
    for (std::size_t j = 0; j < 3; ++j) x.at(0, j) = 12.0;
    IsolationParams p;
    p.n_trees = 100;
    p.subsample = 64;
    p.extension_level = 2;
    p.seed = seed;
    if (argmax(eif_score(x, p)) == 0) ++hits;
  }
  CHECK(hits >= 19);
}

TEST_CASE("INNE: two points cover each other, every estimator scores zero") {
  const Matrix x(2, 1, {0.0, 1.0});
  IsolationParams p;
  p.n_estimators = 40;
  p.inne_subsample = 2;
  p.seed = 3;
  const auto s = inne_score(x, p);
  CHECK(s[0] == doctest::Approx(0.0));
  CHECK(s[1] == doctest::Approx(0.0));
}

TEST_CASE("INNE: a far point is uncovered by nearly every estimator") {
  Rng rng(8);
  Matrix x = gaussian_blob(40, 2, rng, 0.2);
  x.at(0, 0) = 1000.0;
  x.at(0, 1) = 1000.0;
  IsolationParams p;
  p.seed = 5;
  const auto s = inne_score(x, p);
  CHECK(s[0] > 0.99);
  CHECK(argmax(s) == 0);
}

TEST_CASE("INNE clamps the subsample to n") {
  const Matrix x(3, 1, {0.0, 1.0, 2.0});
  IsolationParams p;
  p.inne_subsample = 8;  // > n
  p.seed = 1;
  CHECK_NOTHROW(inne_score(x, p));
}
