#include "odbench/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace odbench {

namespace {

// Bit-pattern hash of a row; dedupe compares raw values exactly.
struct RowHash {
  const Matrix* x;
  std::size_t operator()(std::size_t i) const {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (double v : x->row(i)) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof(bits));
      for (int b = 0; b < 8; ++b) {
        h ^= (bits >> (8 * b)) & 0xFF;
        h *= 0x100000001B3ULL;
      }
    }
    return static_cast<std::size_t>(h);
  }
};

struct RowEq {
  const Matrix* x;
  bool operator()(std::size_t a, std::size_t b) const {
    const auto ra = x->row(a), rb = x->row(b);
    return std::memcmp(ra.data(), rb.data(), ra.size_bytes()) == 0;
  }
};

}  // namespace

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty vector");
  if (sorted.size() == 1) return sorted[0];
  p = std::clamp(p, 0.0, 1.0);
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

DedupeResult dedupe_rows(const Matrix& x) {
  DedupeResult out;
  std::unordered_map<std::size_t, std::size_t, RowHash, RowEq> seen(
      16, RowHash{&x}, RowEq{&x});
  out.kept_indices.reserve(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    if (seen.emplace(i, i).second) out.kept_indices.push_back(i);
  }
  out.removed = x.rows() - out.kept_indices.size();
  out.matrix = Matrix(out.kept_indices.size(), x.cols());
  for (std::size_t r = 0; r < out.kept_indices.size(); ++r) {
    const auto src = x.row(out.kept_indices[r]);
    std::copy(src.begin(), src.end(), out.matrix.row(r).begin());
  }
  return out;
}

ScaleResult robust_scale(const Matrix& x) {
  const std::size_t n = x.rows(), d = x.cols();
  std::vector<double> medians(d), iqrs(d);
  std::vector<bool> keep(d, false);
  std::size_t kept_cols = 0;

  std::vector<double> col(n);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = x.at(i, j);
    std::sort(col.begin(), col.end());
    medians[j] = quantile_sorted(col, 0.5);
    iqrs[j] = quantile_sorted(col, 0.75) - quantile_sorted(col, 0.25);
    if (iqrs[j] > 0.0) {
      keep[j] = true;
      ++kept_cols;
    }
  }
  if (kept_cols == 0) throw std::runtime_error("robust_scale: no informative variables");

  ScaleResult out;
  out.matrix = Matrix(n, kept_cols);
  for (std::size_t j = 0, q = 0; j < d; ++j) {
    if (!keep[j]) {
      out.report.columns_dropped.push_back(j);
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) {
      out.matrix.at(i, q) = (x.at(i, j) - medians[j]) / iqrs[j];
    }
    out.report.medians.push_back(medians[j]);
    out.report.iqrs.push_back(iqrs[j]);
    ++q;
  }
  return out;
}

Dataset preprocess_dataset(const Dataset& ds, PreprocessReport* report) {
  auto deduped = dedupe_rows(ds.features);
  auto scaled = robust_scale(deduped.matrix);
  scaled.report.duplicates_removed = deduped.removed;

  Dataset out;
  out.name = ds.name;
  out.features = std::move(scaled.matrix);
  out.invert_labels = ds.invert_labels;
  out.exclude = ds.exclude;
  if (ds.labels) {
    std::vector<int> y;
    y.reserve(deduped.kept_indices.size());
    for (std::size_t idx : deduped.kept_indices) y.push_back((*ds.labels)[idx]);
    out.labels = std::move(y);
  }
  if (out.features.rows() < 2) {
    throw std::runtime_error("dataset '" + ds.name + "': fewer than 2 samples after dedupe");
  }
  if (report) *report = scaled.report;
  return out;
}

}  // namespace odbench
