#include "odbench/rankstats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace odbench {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0); }
double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1]
constexpr std::array<double, 8> kGlNodes = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kGlWeights = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

// integrand of the studentized-range CDF with infinite df:
// k * phi(z) * (Phi(z) - Phi(z - q))^(k-1)
double sr_panel(double a, double b, double q, std::size_t k) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t t = 0; t < kGlNodes.size(); ++t) {
    for (double sign : {-1.0, 1.0}) {
      const double z = mid + sign * half * kGlNodes[t];
      const double inner = normal_cdf(z) - normal_cdf(z - q);
      acc += kGlWeights[t] * normal_pdf(z) *
             std::pow(std::max(inner, 0.0), static_cast<double>(k - 1));
    }
  }
  return acc * half * static_cast<double>(k);
}

double sr_integral(double q, std::size_t k, std::size_t panels) {
  const double lo = -9.0, hi = 9.0 + q;
  double acc = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = lo + (hi - lo) * static_cast<double>(p) / static_cast<double>(panels);
    const double b = lo + (hi - lo) * static_cast<double>(p + 1) / static_cast<double>(panels);
    acc += sr_panel(a, b, q, k);
  }
  return acc;
}

}  // namespace

FriedmanRanks friedman_ranks(const AucMatrix& m) {
  const std::size_t k = m.algorithms.size(), n = m.datasets.size();
  if (k < 2 || n < 1) throw std::invalid_argument("friedman: need k >= 2 and N >= 1");

  FriedmanRanks out;
  out.ranks = Matrix(k, n);
  std::vector<std::size_t> order(k);
  for (std::size_t j = 0; j < n; ++j) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return m.values.at(a, j) > m.values.at(b, j);
    });
    std::size_t i = 0;
    while (i < k) {
      std::size_t t = i;
      while (t + 1 < k && m.values.at(order[t + 1], j) == m.values.at(order[i], j)) ++t;
      const double avg = 0.5 * static_cast<double>(i + 1 + t + 1);
      for (std::size_t u = i; u <= t; ++u) out.ranks.at(order[u], j) = avg;
      i = t + 1;
    }
  }
  out.mean_ranks.resize(k);
  for (std::size_t a = 0; a < k; ++a) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += out.ranks.at(a, j);
    out.mean_ranks[a] = sum / static_cast<double>(n);
  }
  return out;
}

double iman_davenport(const FriedmanRanks& ranks, std::size_t n_datasets) {
  const std::size_t k = ranks.mean_ranks.size();
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n_datasets);

  double sum_sq = 0.0;
  for (double r : ranks.mean_ranks) sum_sq += r * r;
  const double chi2 = 12.0 * nd / (kd * (kd + 1.0)) *
                      (sum_sq - kd * (kd + 1.0) * (kd + 1.0) / 4.0);
  const double denom = nd * (kd - 1.0) - chi2;
  if (denom <= 0.0) throw std::domain_error("statistic saturated");
  return (nd - 1.0) * chi2 / denom;
}

double studentized_range_cdf(double q, std::size_t k) {
  if (q <= 0.0) return 0.0;
  if (k < 2) throw std::invalid_argument("studentized range: need k >= 2");
  // refine the panel count until two estimates agree
  double prev = sr_integral(q, k, 24);
  for (std::size_t panels : {48, 96}) {
    const double cur = sr_integral(q, k, panels);
    if (std::abs(cur - prev) < 1e-7) return std::clamp(cur, 0.0, 1.0);
    prev = cur;
  }
  return std::clamp(prev, 0.0, 1.0);
}

Matrix nemenyi_pairwise(const FriedmanRanks& ranks, std::size_t n_datasets) {
  const std::size_t k = ranks.mean_ranks.size();
  const double kd = static_cast<double>(k);
  const double se = std::sqrt(kd * (kd + 1.0) / (12.0 * static_cast<double>(n_datasets)));

  Matrix p(k, k);
  for (std::size_t i = 0; i < k; ++i) p.at(i, i) = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double q = std::abs(ranks.mean_ranks[i] - ranks.mean_ranks[j]) / se;
      const double pv = 1.0 - studentized_range_cdf(q, k);
      p.at(i, j) = pv;
      p.at(j, i) = pv;
    }
  }
  return p;
}

SummaryTable significance_table(const Matrix& p, std::span<const double> mean_auc,
                                std::span<const double> mean_ranks,
                                std::span<const std::string> names) {
  const std::size_t k = names.size();
  std::vector<std::size_t> row_order(k), col_order(k);
  std::iota(row_order.begin(), row_order.end(), std::size_t{0});
  std::iota(col_order.begin(), col_order.end(), std::size_t{0});
  std::stable_sort(row_order.begin(), row_order.end(), [&](std::size_t a, std::size_t b) {
    return mean_auc[a] > mean_auc[b];
  });
  std::stable_sort(col_order.begin(), col_order.end(), [&](std::size_t a, std::size_t b) {
    return mean_auc[a] < mean_auc[b];
  });

  const auto marker = [&](std::size_t row, std::size_t col) -> std::string {
    if (row == col) return "";
    const double pv = p.at(row, col);
    const bool row_better = mean_ranks[row] < mean_ranks[col];
    if (pv <= 0.05) return row_better ? "++" : "--";
    if (pv <= 0.10) return row_better ? "+" : "-";
    return "";
  };

  // a column stays only if some row outperforms it
  std::vector<std::size_t> kept_cols;
  for (std::size_t c : col_order) {
    bool any = false;
    for (std::size_t r : row_order) {
      const std::string mk = marker(r, c);
      if (mk == "++" || mk == "+") {
        any = true;
        break;
      }
    }
    if (any) kept_cols.push_back(c);
  }

  SummaryTable table;
  for (std::size_t r : row_order) {
    table.row_names.push_back(names[r]);
    table.row_mean_auc.push_back(mean_auc[r]);
  }
  for (std::size_t c : kept_cols) table.column_names.push_back(names[c]);
  table.cells.resize(row_order.size() * kept_cols.size());
  for (std::size_t ri = 0; ri < row_order.size(); ++ri) {
    for (std::size_t ci = 0; ci < kept_cols.size(); ++ci) {
      table.cells[ri * kept_cols.size() + ci] = marker(row_order[ri], kept_cols[ci]);
    }
  }
  return table;
}

std::string SummaryTable::to_ascii() const {
  std::size_t name_w = 4;
  for (const auto& r : row_names) name_w = std::max(name_w, r.size());
  std::vector<std::size_t> col_w(column_names.size());
  for (std::size_t c = 0; c < column_names.size(); ++c) {
    col_w[c] = std::max<std::size_t>(2, column_names[c].size());
  }

  std::ostringstream out;
  out << std::string(name_w, ' ');
  for (std::size_t c = 0; c < column_names.size(); ++c) {
    out << "  " << column_names[c]
        << std::string(col_w[c] - column_names[c].size(), ' ');
  }
  out << "  mean AUC\n";
  char buf[32];
  for (std::size_t r = 0; r < row_names.size(); ++r) {
    out << row_names[r] << std::string(name_w - row_names[r].size(), ' ');
    for (std::size_t c = 0; c < column_names.size(); ++c) {
      const std::string& mk = cell(r, c);
      out << "  " << mk << std::string(col_w[c] - mk.size(), ' ');
    }
    std::snprintf(buf, sizeof(buf), "%.3f", row_mean_auc[r]);
    out << "  " << buf << '\n';
  }
  return out.str();
}

RankSummary summarize_ranks(const AucMatrix& m) {
  RankSummary s;
  s.friedman = friedman_ranks(m);
  try {
    s.iman_davenport_f = iman_davenport(s.friedman, m.datasets.size());
  } catch (const std::domain_error&) {
    s.saturated = true;
    s.iman_davenport_f = std::numeric_limits<double>::infinity();
  }
  s.nemenyi_p = nemenyi_pairwise(s.friedman, m.datasets.size());
  return s;
}

}  // namespace odbench
