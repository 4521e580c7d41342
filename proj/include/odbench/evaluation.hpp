#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "odbench/types.hpp"

namespace odbench {

/// ROC-AUC by average-rank (Mann-Whitney) computation; tied scores count
/// half a win. Throws when only one class is present.
double roc_auc(const ScoreVector& scores, std::span<const int> labels);

/// Per-entry AUC(a,d) / max_a' AUC(a',d) * 100.
Matrix percent_of_max(const AucMatrix& m);

enum class Verdict { kKeep, kInvert, kExclude };

struct DatasetDiagnosis {
  double max_auc = 0.0;
  double min_auc = 0.0;
  Verdict verdict = Verdict::kKeep;
};

/// Per-dataset verdict from the AUC of every algorithm on it: exclude when
/// everything sits in [0.4, 0.6]; invert when nothing clears 0.6 but
/// something drops below 0.4; keep otherwise.
DatasetDiagnosis diagnose_dataset(std::span<const double> auc_column);

const char* verdict_name(Verdict v);

}  // namespace odbench
