#include "odbench/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace odbench {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw std::invalid_argument("matrix: value count does not match shape");
  }
}

std::vector<double> Matrix::column(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = at(i, j);
  return out;
}

ScoreVector::ScoreVector(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw std::runtime_error("score vector: non-finite value at index " +
                               std::to_string(i));
    }
  }
}

Dataset validate_dataset(Dataset raw) {
  const Matrix& x = raw.features;
  if (x.rows() < 2) {
    throw std::invalid_argument("dataset '" + raw.name + "': fewer than 2 samples");
  }
  if (x.cols() < 1) {
    throw std::invalid_argument("dataset '" + raw.name + "': no variables");
  }
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      if (!std::isfinite(x.at(i, j))) {
        throw std::invalid_argument("dataset '" + raw.name + "': non-finite value at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  if (raw.labels) {
    auto& y = *raw.labels;
    if (y.size() != x.rows()) {
      throw std::invalid_argument("dataset '" + raw.name + "': label length " +
                                  std::to_string(y.size()) + " != sample count " +
                                  std::to_string(x.rows()));
    }
    std::size_t normals = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] != 0 && y[i] != 1) {
        throw std::invalid_argument("dataset '" + raw.name + "': label outside {0,1} at row " +
                                    std::to_string(i));
      }
      if (y[i] == 0) ++normals;
    }
    if (normals == 0) {
      throw std::invalid_argument("dataset '" + raw.name + "': labels contain no normal sample");
    }
  }
  return raw;
}

std::size_t AucMatrix::algorithm_index(const std::string& name) const {
  for (std::size_t i = 0; i < algorithms.size(); ++i) {
    if (algorithms[i] == name) return i;
  }
  throw std::invalid_argument("unknown algorithm: " + name);
}

std::size_t AucMatrix::dataset_index(const std::string& name) const {
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    if (datasets[i] == name) return i;
  }
  throw std::invalid_argument("unknown dataset: " + name);
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

}  // namespace odbench
