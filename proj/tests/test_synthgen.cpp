#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "odbench/detectors/isolation.hpp"
#include "odbench/detectors/proximity.hpp"
#include "odbench/evaluation.hpp"
#include "odbench/neighbors.hpp"
#include "odbench/preprocess.hpp"
#include "odbench/synthgen.hpp"

using namespace odbench;

namespace {

std::vector<std::size_t> anomaly_rows(const Dataset& ds) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ds.labels->size(); ++i) {
    if ((*ds.labels)[i] == 1) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> normal_rows(const Dataset& ds) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ds.labels->size(); ++i) {
    if ((*ds.labels)[i] == 0) out.push_back(i);
  }
  return out;
}

// 2D convex-hull membership: the point must never lie strictly to the
// right of a hull edge walked counterclockwise
bool inside_hull_2d(const std::vector<std::pair<double, double>>& cloud, double px,
                    double py) {
  auto pts = cloud;
  std::sort(pts.begin(), pts.end());
  const auto cross = [](const std::pair<double, double>& o,
                        const std::pair<double, double>& a,
                        const std::pair<double, double>& b) {
    return (a.first - o.first) * (b.second - o.second) -
           (a.second - o.second) * (b.first - o.first);
  };
  std::vector<std::pair<double, double>> hull;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t base = hull.size();
    for (const auto& p : pts) {
      while (hull.size() >= base + 2 &&
             cross(hull[hull.size() - 2], hull.back(), p) <= 0) {
        hull.pop_back();
      }
      hull.push_back(p);
    }
    hull.pop_back();
    std::reverse(pts.begin(), pts.end());
  }
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    if (cross(a, b, {px, py}) < 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("identical specs generate bit-identical datasets") {
  ArchetypeSpec spec;
  spec.archetype = Archetype::kLocal;
  spec.n = 300;
  spec.d = 3;
  spec.contamination = 0.04;
  spec.seed = 99;
  const Dataset a = generate_archetype(spec);
  const Dataset b = generate_archetype(spec);
  REQUIRE(a.features.rows() == b.features.rows());
  for (std::size_t i = 0; i < a.features.rows(); ++i) {
    for (std::size_t j = 0; j < a.features.cols(); ++j) {
      CHECK(a.features.at(i, j) == b.features.at(i, j));
    }
  }
  CHECK(*a.labels == *b.labels);
}

TEST_CASE("anomaly count equals round(contamination * n)") {
  for (Archetype arch : {Archetype::kGlobal, Archetype::kPeripheral,
                         Archetype::kClustered, Archetype::kUnivariate}) {
    ArchetypeSpec spec;
    spec.archetype = arch;
    spec.n = 500;
    spec.d = 2;
    spec.contamination = 0.061;
    spec.seed = 5;
    const Dataset ds = generate_archetype(spec);
    CHECK(anomaly_rows(ds).size() == 31);  // round(0.061 * 500)
  }
}

TEST_CASE("invalid specs are rejected") {
  ArchetypeSpec spec;
  spec.n = 10;
  spec.contamination = 0.01;  // 0.1 anomalies rounds below 1
  CHECK_THROWS_AS(generate_archetype(spec), std::invalid_argument);
  spec.contamination = 0.6;
  CHECK_THROWS_AS(generate_archetype(spec), std::invalid_argument);
  spec.contamination = 0.1;
  spec.d = 1;
  CHECK_THROWS_AS(generate_archetype(spec), std::invalid_argument);
}

TEST_CASE("peripheral anomalies leave the normals' bounding box") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    ArchetypeSpec spec;
    spec.archetype = Archetype::kPeripheral;
    spec.n = 400;
    spec.d = 4;
    spec.contamination = 0.05;
    spec.seed = seed;
    const Dataset ds = generate_archetype(spec);
    const auto normals = normal_rows(ds);
    std::vector<double> lo(spec.d, 1e300), hi(spec.d, -1e300);
    for (std::size_t i : normals) {
      for (std::size_t j = 0; j < spec.d; ++j) {
        lo[j] = std::min(lo[j], ds.features.at(i, j));
        hi[j] = std::max(hi[j], ds.features.at(i, j));
      }
    }
    for (std::size_t i : anomaly_rows(ds)) {
      bool outside = false;
      for (std::size_t j = 0; j < spec.d; ++j) {
        outside |= ds.features.at(i, j) < lo[j] || ds.features.at(i, j) > hi[j];
      }
      CHECK(outside);
    }
  }
}

TEST_CASE("global anomalies sit beyond the normals' neighbor distances") {
  ArchetypeSpec spec;
  spec.archetype = Archetype::kGlobal;
  spec.n = 1000;
  spec.d = 2;
  spec.contamination = 0.05;
  spec.seed = 11;
  const Dataset ds = generate_archetype(spec);
  const auto table = build_neighbor_table(ds.features, 10);
  std::vector<double> normal_kdist;
  for (std::size_t i : normal_rows(ds)) {
    normal_kdist.push_back(table.row(i)[9].distance);
  }
  std::sort(normal_kdist.begin(), normal_kdist.end());
  const double p95 = quantile_sorted(normal_kdist, 0.95);
  for (std::size_t i : anomaly_rows(ds)) {
    CHECK(table.row(i)[9].distance > p95);
  }
}

TEST_CASE("enclosed anomalies stay inside the normals' convex hull") {
  ArchetypeSpec spec;
  spec.archetype = Archetype::kEnclosed;
  spec.n = 400;
  spec.d = 2;
  spec.contamination = 0.05;
  spec.seed = 21;
  const Dataset ds = generate_archetype(spec);
  std::vector<std::pair<double, double>> cloud;
  for (std::size_t i : normal_rows(ds)) {
    cloud.emplace_back(ds.features.at(i, 0), ds.features.at(i, 1));
  }
  for (std::size_t i : anomaly_rows(ds)) {
    CHECK(inside_hull_2d(cloud, ds.features.at(i, 0), ds.features.at(i, 1)));
  }
}

TEST_CASE("multivariate anomalies hide in the marginals but not jointly") {
  ArchetypeSpec spec;
  spec.archetype = Archetype::kMultivariate;
  spec.n = 600;
  spec.d = 3;
  spec.contamination = 0.04;
  spec.seed = 31;
  const Dataset ds = generate_archetype(spec);
  const auto normals = normal_rows(ds);
  const auto anomalies = anomaly_rows(ds);

  std::vector<double> lo(spec.d, 1e300), hi(spec.d, -1e300);
  std::vector<double> mean(spec.d, 0.0);
  for (std::size_t i : normals) {
    for (std::size_t j = 0; j < spec.d; ++j) {
      lo[j] = std::min(lo[j], ds.features.at(i, j));
      hi[j] = std::max(hi[j], ds.features.at(i, j));
      mean[j] += ds.features.at(i, j);
    }
  }
  for (double& m : mean) m /= static_cast<double>(normals.size());

  // inside the box on every coordinate
  for (std::size_t i : anomalies) {
    for (std::size_t j = 0; j < spec.d; ++j) {
      CHECK(ds.features.at(i, j) >= lo[j]);
      CHECK(ds.features.at(i, j) <= hi[j]);
    }
  }

  // but far in Mahalanobis terms: sample covariance of the normals
  std::vector<std::vector<double>> cov(spec.d, std::vector<double>(spec.d, 0.0));
  for (std::size_t i : normals) {
    for (std::size_t a = 0; a < spec.d; ++a) {
      for (std::size_t b = 0; b < spec.d; ++b) {
        cov[a][b] += (ds.features.at(i, a) - mean[a]) * (ds.features.at(i, b) - mean[b]);
      }
    }
  }
  for (auto& row : cov) {
    for (double& v : row) v /= static_cast<double>(normals.size() - 1);
  }
  // 3x3 inverse via adjugate
  const auto det3 = [&]() {
    return cov[0][0] * (cov[1][1] * cov[2][2] - cov[1][2] * cov[2][1]) -
           cov[0][1] * (cov[1][0] * cov[2][2] - cov[1][2] * cov[2][0]) +
           cov[0][2] * (cov[1][0] * cov[2][1] - cov[1][1] * cov[2][0]);
  }();
  std::vector<std::vector<double>> inv(3, std::vector<double>(3));
  inv[0][0] = (cov[1][1] * cov[2][2] - cov[1][2] * cov[2][1]) / det3;
  inv[0][1] = (cov[0][2] * cov[2][1] - cov[0][1] * cov[2][2]) / det3;
  inv[0][2] = (cov[0][1] * cov[1][2] - cov[0][2] * cov[1][1]) / det3;
  inv[1][0] = (cov[1][2] * cov[2][0] - cov[1][0] * cov[2][2]) / det3;
  inv[1][1] = (cov[0][0] * cov[2][2] - cov[0][2] * cov[2][0]) / det3;
  inv[1][2] = (cov[0][2] * cov[1][0] - cov[0][0] * cov[1][2]) / det3;
  inv[2][0] = (cov[1][0] * cov[2][1] - cov[1][1] * cov[2][0]) / det3;
  inv[2][1] = (cov[0][1] * cov[2][0] - cov[0][0] * cov[2][1]) / det3;
  inv[2][2] = (cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0]) / det3;
  const auto mahal2 = [&](std::size_t i) {
    double m2 = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = 0; b < 3; ++b) {
        m2 += (ds.features.at(i, a) - mean[a]) * inv[a][b] *
              (ds.features.at(i, b) - mean[b]);
      }
    }
    return m2;
  };
  std::vector<double> normal_m2;
  for (std::size_t i : normals) normal_m2.push_back(mahal2(i));
  std::sort(normal_m2.begin(), normal_m2.end());
  const double p99 = quantile_sorted(normal_m2, 0.99);
  for (std::size_t i : anomalies) CHECK(mahal2(i) > p99);
}

TEST_CASE("isolated anomalies keep their distance from each other") {
  ArchetypeSpec spec;
  spec.archetype = Archetype::kIsolated;
  spec.n = 400;
  spec.d = 3;
  spec.contamination = 0.03;
  spec.seed = 41;
  const Dataset ds = generate_archetype(spec);
  const auto anomalies = anomaly_rows(ds);
  for (std::size_t a = 0; a < anomalies.size(); ++a) {
    for (std::size_t b = a + 1; b < anomalies.size(); ++b) {
      CHECK(euclidean_distance(ds.features.row(anomalies[a]),
                               ds.features.row(anomalies[b])) >= 2.0);
    }
  }
}

TEST_CASE("univariate anomalies are extreme in exactly one marginal") {
  ArchetypeSpec spec;
  spec.archetype = Archetype::kUnivariate;
  spec.n = 500;
  spec.d = 4;
  spec.contamination = 0.04;
  spec.seed = 51;
  const Dataset ds = generate_archetype(spec);
  const auto normals = normal_rows(ds);
  for (std::size_t i : anomaly_rows(ds)) {
    std::size_t extreme_coords = 0;
    for (std::size_t j = 0; j < spec.d; ++j) {
      std::vector<double> col;
      for (std::size_t t : normals) col.push_back(ds.features.at(t, j));
      std::sort(col.begin(), col.end());
      const double iqr = quantile_sorted(col, 0.75) - quantile_sorted(col, 0.25);
      const double med = quantile_sorted(col, 0.5);
      if (std::abs(ds.features.at(i, j) - med) > 4.0 * iqr) ++extreme_coords;
    }
    CHECK(extreme_coords == 1);
  }
}

TEST_CASE("local construction favors density methods, global favors isolation") {
  // scaled-down direction check; the acceptance suite runs the full
  // grid-averaged comparison over ten seeds
  double lof_local = 0.0, if_local = 0.0, eif_global = 0.0, lof_global = 0.0;
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    ArchetypeSpec spec;
    spec.n = 600;
    spec.d = 2;
    spec.contamination = 0.04;
    spec.seed = seed;

    spec.archetype = Archetype::kLocal;
    const Dataset local = generate_archetype(spec);
    const Dataset plocal = preprocess_dataset(local);
    IsolationParams ip;
    ip.n_trees = 200;
    ip.subsample = 256;
    ip.seed = seed;
    lof_local += roc_auc(lof_score(plocal.features, 10), *plocal.labels);
    if_local += roc_auc(if_score(plocal.features, ip), *plocal.labels);

    spec.archetype = Archetype::kGlobal;
    const Dataset global = generate_archetype(spec);
    const Dataset pglobal = preprocess_dataset(global);
    ip.extension_level = 1;
    eif_global += roc_auc(eif_score(pglobal.features, ip), *pglobal.labels);
    lof_global += roc_auc(lof_score(pglobal.features, 10), *pglobal.labels);
  }
  CHECK(lof_local > if_local);
  CHECK(eif_global >= lof_global);
}
