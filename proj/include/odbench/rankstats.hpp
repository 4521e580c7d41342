#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "odbench/types.hpp"

namespace odbench {

struct FriedmanRanks {
  Matrix ranks;                   // algorithms x datasets, rank 1 = best AUC
  std::vector<double> mean_ranks;
};

/// Per-dataset descending-AUC ranks, tied entries averaged. Every column
/// of the rank matrix sums to k(k+1)/2.
FriedmanRanks friedman_ranks(const AucMatrix& m);

/// Iman-Davenport F statistic derived from the Friedman chi-square.
/// Throws std::domain_error("statistic saturated") when the ranks separate
/// completely and the denominator vanishes.
double iman_davenport(const FriedmanRanks& ranks, std::size_t n_datasets);

/// CDF of the studentized range distribution with k groups and infinite
/// degrees of freedom, evaluated by adaptive Gauss-Legendre integration to
/// about 1e-6 absolute accuracy.
double studentized_range_cdf(double q, std::size_t k);

/// Symmetric matrix of Nemenyi post-hoc p-values: the rank difference
/// scaled by sqrt(k(k+1)/(12N)) is referred to the studentized range.
Matrix nemenyi_pairwise(const FriedmanRanks& ranks, std::size_t n_datasets);

struct SummaryTable {
  std::vector<std::string> row_names;     // descending mean AUC
  std::vector<std::string> column_names;  // ascending mean AUC, pruned
  std::vector<std::string> cells;         // "++", "+", "--", "-" or ""
  std::vector<double> row_mean_auc;

  const std::string& cell(std::size_t r, std::size_t c) const {
    return cells[r * column_names.size() + c];
  }
  std::string to_ascii() const;
};

/// Pairwise significance markers: ++/+ when the row algorithm has the
/// better mean rank at p <= 0.05 / 0.10, --/- the reverse. Columns in
/// which no algorithm scores a marker are dropped.
SummaryTable significance_table(const Matrix& p, std::span<const double> mean_auc,
                                std::span<const double> mean_ranks,
                                std::span<const std::string> names);

struct RankSummary {
  FriedmanRanks friedman;
  double iman_davenport_f = 0.0;
  bool saturated = false;
  Matrix nemenyi_p;
};

RankSummary summarize_ranks(const AucMatrix& m);

}  // namespace odbench
