#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <unistd.h>

#include "doctest.h"
#include "odbench/io.hpp"
#include "odbench/rng.hpp"
#include "odbench/types.hpp"

using namespace odbench;

namespace {

Dataset tiny_dataset() {
  Dataset ds;
  ds.name = "tiny";
  ds.features = Matrix(3, 2, {1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
  ds.labels = std::vector<int>{0, 1, 0};
  return ds;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("odbench_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

}  // namespace

TEST_CASE("well-formed dataset passes validation unchanged") {
  const Dataset ds = validate_dataset(tiny_dataset());
  CHECK(ds.features.rows() == 3);
  CHECK(ds.labels->at(1) == 1);
}

TEST_CASE("non-finite feature value is rejected with its position") {
  Dataset ds = tiny_dataset();
  ds.features.at(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_WITH_AS(validate_dataset(ds),
                       doctest::Contains("non-finite value at (1,1)"),
                       std::invalid_argument);
}

TEST_CASE("label outside {0,1} is rejected") {
  Dataset ds = tiny_dataset();
  (*ds.labels)[1] = 2;
  CHECK_THROWS_WITH_AS(validate_dataset(ds), doctest::Contains("label outside {0,1}"),
                       std::invalid_argument);
}

TEST_CASE("single sample and all-anomaly labels are rejected") {
  Dataset ds = tiny_dataset();
  ds.features = Matrix(1, 2, {1.0, 2.0});
  ds.labels = std::vector<int>{1};
  CHECK_THROWS_AS(validate_dataset(ds), std::invalid_argument);

  Dataset all_anom = tiny_dataset();
  all_anom.labels = std::vector<int>{1, 1, 1};
  CHECK_THROWS_AS(validate_dataset(all_anom), std::invalid_argument);
}

TEST_CASE("CSV round trip preserves features and labels") {
  TempDir tmp;
  Rng rng(99);
  Dataset ds;
  ds.name = "roundtrip";
  ds.features = Matrix(40, 5);
  for (std::size_t i = 0; i < 40; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      ds.features.at(i, j) = (rng.next_double() - 0.5) * std::pow(10.0, (int)rng.next_below(8) - 4);
    }
  }
  std::vector<int> labels(40);
  for (auto& y : labels) y = rng.next_below(2) ? 1 : 0;
  ds.labels = labels;

  const auto path = tmp.path / "ds.csv";
  write_dataset_csv(ds, path);
  const Dataset back = read_dataset_csv(path, "roundtrip");
  REQUIRE(back.features.rows() == 40);
  REQUIRE(back.features.cols() == 5);
  CHECK(*back.labels == labels);
  for (std::size_t i = 0; i < 40; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      // 12 significant decimal digits of the original value
      CHECK(back.features.at(i, j) ==
            doctest::Approx(ds.features.at(i, j)).epsilon(1e-11));
    }
  }

  // writing the re-read dataset again must reproduce identical bytes
  const auto path2 = tmp.path / "ds2.csv";
  write_dataset_csv(back, path2);
  std::ifstream a(path), b(path2);
  const std::string sa((std::istreambuf_iterator<char>(a)), {});
  const std::string sb((std::istreambuf_iterator<char>(b)), {});
  // headers differ only if column naming differs; both files use f0..f4
  CHECK(sa == sb);
}

TEST_CASE("manifest parsing resolves relative paths and flags") {
  TempDir tmp;
  write_dataset_csv(tiny_dataset(), tmp.path / "tiny.csv");
  std::ofstream m(tmp.path / "manifest.json");
  m << R"([{"name":"tiny","path":"tiny.csv","invert_labels":true},
           {"name":"skipped","path":"tiny.csv","exclude":true}])";
  m.close();

  const auto entries = read_manifest(tmp.path / "manifest.json");
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].invert_labels);
  CHECK_FALSE(entries[0].exclude);
  CHECK(entries[1].exclude);
  CHECK(std::filesystem::path(entries[0].path).is_absolute());
}

TEST_CASE("AUC matrix CSV round trip") {
  TempDir tmp;
  AucMatrix m;
  m.algorithms = {"kNN", "IF"};
  m.datasets = {"a", "b", "c"};
  m.values = Matrix(2, 3, {0.5, 0.75, 1.0, 0.25, 0.5, 0.125});
  const auto path = tmp.path / "auc.csv";
  write_auc_matrix_csv(m, path);
  const AucMatrix back = read_auc_matrix_csv(path);
  CHECK(back.algorithms == m.algorithms);
  CHECK(back.datasets == m.datasets);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(back.values.at(i, j) == doctest::Approx(m.values.at(i, j)).epsilon(1e-9));
    }
  }
}

TEST_CASE("score vector construction rejects non-finite entries") {
  CHECK_THROWS_AS(ScoreVector({1.0, std::numeric_limits<double>::infinity()}),
                  std::runtime_error);
  const ScoreVector ok({1.0, -2.0, 0.0});
  CHECK(ok.size() == 3);
}
