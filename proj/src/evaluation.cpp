#include "odbench/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace odbench {

double roc_auc(const ScoreVector& scores, std::span<const int> labels) {
  const std::size_t n = scores.size();
  if (labels.size() != n) throw std::invalid_argument("AUC: score/label length mismatch");

  std::size_t n_pos = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) throw std::invalid_argument("AUC: label outside {0,1}");
    n_pos += static_cast<std::size_t>(y);
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw std::invalid_argument("AUC: both classes must be present");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  // average ranks over tie groups; rank sums stay exact in doubles
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j + 1);
    for (std::size_t t = i; t <= j; ++t) {
      if (labels[order[t]] == 1) pos_rank_sum += avg_rank;
    }
    i = j + 1;
  }
  const double u = pos_rank_sum -
                   0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

Matrix percent_of_max(const AucMatrix& m) {
  const std::size_t rows = m.algorithms.size(), cols = m.datasets.size();
  Matrix out(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    double col_max = 0.0;
    for (std::size_t i = 0; i < rows; ++i) col_max = std::max(col_max, m.values.at(i, j));
    if (col_max <= 0.0) {
      // cannot happen for the AUC of two-class data
      throw std::logic_error("percent_of_max: column '" + m.datasets[j] +
                             "' has no positive entry");
    }
    for (std::size_t i = 0; i < rows; ++i) {
      out.at(i, j) = m.values.at(i, j) / col_max * 100.0;
    }
  }
  return out;
}

DatasetDiagnosis diagnose_dataset(std::span<const double> auc_column) {
  if (auc_column.empty()) throw std::invalid_argument("diagnose: empty AUC column");
  DatasetDiagnosis d;
  d.max_auc = *std::max_element(auc_column.begin(), auc_column.end());
  d.min_auc = *std::min_element(auc_column.begin(), auc_column.end());
  if (d.min_auc >= 0.4 && d.max_auc <= 0.6) {
    d.verdict = Verdict::kExclude;
  } else if (d.max_auc <= 0.6 && d.min_auc < 0.4) {
    d.verdict = Verdict::kInvert;
  } else {
    d.verdict = Verdict::kKeep;
  }
  return d;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kKeep: return "keep";
    case Verdict::kInvert: return "invert";
    case Verdict::kExclude: return "exclude";
  }
  return "keep";
}

}  // namespace odbench
