#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace odbench {

/// Dense row-major matrix of doubles (samples x variables).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& at(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) {
    return {values_.data() + i * cols_, cols_};
  }

  std::span<const double> data() const { return values_; }
  std::vector<double> column(std::size_t j) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Per-sample anomaly scores; higher means more anomalous.
/// Construction rejects non-finite entries so no NaN/inf escapes a detector.
class ScoreVector {
 public:
  ScoreVector() = default;
  explicit ScoreVector(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

struct Dataset {
  std::string name;
  Matrix features;
  std::optional<std::vector<int>> labels;  // 0 = normal, 1 = anomaly
  bool invert_labels = false;
  bool exclude = false;
};

/// Checks basic well-formedness: finite features, n >= 2, binary labels of
/// matching length with at least one normal sample. Returns the dataset
/// unchanged on success; throws std::invalid_argument otherwise.
Dataset validate_dataset(Dataset raw);

/// Algorithms x datasets grid of mean AUC values, all entries in [0, 1].
struct AucMatrix {
  std::vector<std::string> algorithms;
  std::vector<std::string> datasets;
  Matrix values;  // algorithms.size() x datasets.size()

  std::size_t algorithm_index(const std::string& name) const;
  std::size_t dataset_index(const std::string& name) const;
};

/// Euclidean distance between two equal-length vectors, accumulated in
/// coordinate order so independent code paths agree bit for bit.
double euclidean_distance(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace odbench
