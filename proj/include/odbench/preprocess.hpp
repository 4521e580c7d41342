#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "odbench/types.hpp"

namespace odbench {

struct PreprocessReport {
  std::size_t duplicates_removed = 0;
  std::vector<std::size_t> columns_dropped;
  std::vector<double> medians;  // of retained columns, pre-scaling
  std::vector<double> iqrs;     // of retained columns, strictly > 0
};

struct DedupeResult {
  Matrix matrix;
  std::size_t removed = 0;
  std::vector<std::size_t> kept_indices;  // strictly increasing
};

/// Removes rows that are bitwise identical to an earlier row, keeping the
/// first occurrence in input order.
DedupeResult dedupe_rows(const Matrix& x);

struct ScaleResult {
  Matrix matrix;
  PreprocessReport report;
};

/// Centers every column on its median and divides by its interquartile
/// range. Columns with zero IQR carry no information and are dropped;
/// throws if nothing is left.
ScaleResult robust_scale(const Matrix& x);

/// Full pipeline: dedupe, then scale/drop. Labels are filtered with the
/// kept row indices.
Dataset preprocess_dataset(const Dataset& ds, PreprocessReport* report = nullptr);

/// Quantile with linear interpolation between order statistics at
/// position p*(n-1). `sorted` must be ascending.
double quantile_sorted(std::span<const double> sorted, double p);

}  // namespace odbench
