#include "odbench/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"
#include "odbench/io.hpp"
#include "odbench/rankstats.hpp"
#include "odbench/rng.hpp"

namespace odbench {

namespace {

std::vector<int> effective_labels(const Dataset& ds) {
  if (!ds.labels) {
    throw std::runtime_error("dataset '" + ds.name + "': evaluation requires labels");
  }
  std::vector<int> y = *ds.labels;
  if (ds.invert_labels) {
    for (int& v : y) v = 1 - v;
  }
  return y;
}

nlohmann::ordered_json report_json(const std::string& name, const PreprocessReport& r) {
  nlohmann::ordered_json j;
  j["dataset"] = name;
  j["duplicates_removed"] = r.duplicates_removed;
  j["columns_dropped"] = r.columns_dropped;
  j["medians"] = r.medians;
  j["iqrs"] = r.iqrs;
  return j;
}

}  // namespace

std::uint64_t task_seed(std::uint64_t master, Algorithm a, const std::string& dataset,
                        std::size_t grid_index, std::size_t repeat) {
  std::uint64_t s = mix_seed(master, hash_string(algorithm_name(a)));
  s = mix_seed(s, hash_string(dataset));
  s = mix_seed(s, grid_index);
  return mix_seed(s, repeat);
}

GridResult grid_average(Algorithm algorithm, const Dataset& preprocessed,
                        std::uint64_t master_seed, std::size_t repeats,
                        bool keep_going) {
  const auto labels = effective_labels(preprocessed);
  const Matrix& x = preprocessed.features;

  GridResult result;
  result.algorithm = algorithm_name(algorithm);
  result.dataset = preprocessed.name;

  NeighborTable table;
  const std::size_t need = required_neighbors(algorithm, x.rows());
  if (need > 0) table = build_neighbor_table(x, need);

  const auto grid = grid_for(algorithm);
  const std::size_t reps = is_randomized(algorithm) ? std::max<std::size_t>(repeats, 1) : 1;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    try {
      double auc_sum = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        const std::uint64_t seed =
            task_seed(master_seed, algorithm, preprocessed.name, g, r);
        const ScoreVector scores =
            run_detector(grid[g], x, need > 0 ? &table : nullptr, seed);
        auc_sum += roc_auc(scores, labels);
      }
      result.per_setting_auc.push_back(auc_sum / static_cast<double>(reps));
    } catch (const std::exception& e) {
      result.errors.push_back("grid point " + std::to_string(g) + ": " + e.what());
      if (!keep_going) throw;
    }
  }
  if (result.per_setting_auc.empty()) {
    throw std::runtime_error(result.algorithm + " on " + result.dataset +
                             ": every grid point failed");
  }
  double sum = 0.0;
  for (double v : result.per_setting_auc) sum += v;
  result.mean_auc = sum / static_cast<double>(result.per_setting_auc.size());
  return result;
}

std::vector<LoadedDataset> load_manifest_datasets(
    const std::filesystem::path& manifest, bool keep_going,
    std::vector<std::string>* errors) {
  const auto entries = read_manifest(manifest);
  std::vector<LoadedDataset> out;
  for (const auto& e : entries) {
    try {
      Dataset raw = read_dataset_csv(e.path, e.name);
      raw.invert_labels = e.invert_labels;
      raw.exclude = e.exclude;
      raw = validate_dataset(std::move(raw));
      LoadedDataset ld;
      ld.data = preprocess_dataset(raw, &ld.report);
      out.push_back(std::move(ld));
    } catch (const std::exception& ex) {
      const std::string msg = "manifest entry '" + e.name + "': " + ex.what();
      if (!keep_going) throw std::runtime_error(msg);
      if (errors) errors->push_back(msg);
    }
  }
  return out;
}

BenchmarkOutput run_benchmark(const RunConfig& config) {
#ifdef _OPENMP
  if (config.threads > 0) omp_set_num_threads(config.threads);
#endif
  std::filesystem::create_directories(config.out_dir);
  const std::filesystem::path out_dir(config.out_dir);

  std::vector<std::string> load_errors;
  auto loaded = load_manifest_datasets(config.manifest_path, config.keep_going,
                                       &load_errors);

  // preprocessing reports
  for (const auto& ld : loaded) {
    std::ofstream rep(out_dir / ("preprocess_" + ld.data.name + ".json"));
    rep << report_json(ld.data.name, ld.report).dump(2) << '\n';
  }

  BenchmarkOutput out;
  std::vector<const Dataset*> used;
  for (const auto& ld : loaded) {
    if (ld.data.exclude) continue;
    used.push_back(&ld.data);
    out.matrix.datasets.push_back(ld.data.name);
  }
  for (Algorithm a : config.algorithms) {
    out.matrix.algorithms.push_back(algorithm_name(a));
  }
  out.matrix.values = Matrix(config.algorithms.size(), used.size());

  for (std::size_t ai = 0; ai < config.algorithms.size(); ++ai) {
    for (std::size_t di = 0; di < used.size(); ++di) {
      GridResult r = grid_average(config.algorithms[ai], *used[di],
                                  config.master_seed, config.repeats,
                                  config.keep_going);
      if (!r.errors.empty()) out.complete = false;
      if (r.mean_auc < 0.0 || r.mean_auc > 1.0) {
        throw std::logic_error(r.algorithm + " on " + r.dataset +
                               ": AUC outside [0,1]");
      }
      out.matrix.values.at(ai, di) = r.mean_auc;
      out.details.push_back(std::move(r));
    }
  }

  // dataset verdicts from the finished AUC columns
  for (std::size_t di = 0; di < used.size(); ++di) {
    std::vector<double> column(config.algorithms.size());
    for (std::size_t ai = 0; ai < column.size(); ++ai) {
      column[ai] = out.matrix.values.at(ai, di);
    }
    out.diagnostics.emplace_back(used[di]->name, diagnose_dataset(column));
  }
  if (config.apply_diagnostics) {
    AucMatrix applied;
    applied.algorithms = out.matrix.algorithms;
    std::vector<std::size_t> kept;
    for (std::size_t di = 0; di < used.size(); ++di) {
      if (out.diagnostics[di].second.verdict == Verdict::kExclude) continue;
      kept.push_back(di);
      applied.datasets.push_back(used[di]->name);
    }
    applied.values = Matrix(applied.algorithms.size(), kept.size());
    for (std::size_t ai = 0; ai < applied.algorithms.size(); ++ai) {
      for (std::size_t c = 0; c < kept.size(); ++c) {
        const double v = out.matrix.values.at(ai, kept[c]);
        const bool invert =
            out.diagnostics[kept[c]].second.verdict == Verdict::kInvert;
        applied.values.at(ai, c) = invert ? 1.0 - v : v;
      }
    }
    out.matrix = std::move(applied);
  }

  write_auc_matrix_csv(out.matrix, out_dir / "auc_matrix.csv");

  nlohmann::ordered_json detail = nlohmann::ordered_json::array();
  for (const auto& r : out.details) {
    nlohmann::ordered_json j;
    j["algorithm"] = r.algorithm;
    j["dataset"] = r.dataset;
    j["per_setting_auc"] = r.per_setting_auc;
    j["mean_auc"] = r.mean_auc;
    if (!r.errors.empty()) j["errors"] = r.errors;
    detail.push_back(std::move(j));
  }
  {
    std::ofstream f(out_dir / "grid_detail.json");
    f << detail.dump(2) << '\n';
  }

  nlohmann::ordered_json meta;
  meta["odbench_version"] = "0.1.0";
  meta["manifest"] = config.manifest_path;
  meta["master_seed"] = config.master_seed;
  meta["repeats"] = config.repeats;
  meta["apply_diagnostics"] = config.apply_diagnostics;
  meta["algorithms"] = out.matrix.algorithms;
  meta["inne_subsample"] = 8;
  meta["copod_aggregation"] = "sum over features of max(skew-selected tail, mean of left/right tails)";
  meta["ecod_aggregation"] = "sum over features of max(left, right, skew-selected tail)";
  nlohmann::ordered_json diag = nlohmann::ordered_json::array();
  for (const auto& [name, d] : out.diagnostics) {
    diag.push_back({{"dataset", name},
                    {"min_auc", d.min_auc},
                    {"max_auc", d.max_auc},
                    {"verdict", verdict_name(d.verdict)}});
  }
  meta["diagnostics"] = std::move(diag);
  if (!load_errors.empty()) meta["load_errors"] = load_errors;
  {
    std::ofstream f(out_dir / "run_metadata.json");
    f << meta.dump(2) << '\n';
  }
  return out;
}

void emit_stats(const AucMatrix& m, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const RankSummary s = summarize_ranks(m);

  {
    std::ofstream f(out_dir / "ranks.csv");
    f << "algorithm,mean_rank";
    for (const auto& dname : m.datasets) f << ',' << dname;
    f << '\n';
    char buf[32];
    for (std::size_t a = 0; a < m.algorithms.size(); ++a) {
      f << m.algorithms[a];
      std::snprintf(buf, sizeof(buf), "%.6f", s.friedman.mean_ranks[a]);
      f << ',' << buf;
      for (std::size_t j = 0; j < m.datasets.size(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.1f", s.friedman.ranks.at(a, j));
        f << ',' << buf;
      }
      f << '\n';
    }
  }
  {
    std::ofstream f(out_dir / "nemenyi.csv");
    f << "algorithm";
    for (const auto& name : m.algorithms) f << ',' << name;
    f << '\n';
    char buf[32];
    for (std::size_t i = 0; i < m.algorithms.size(); ++i) {
      f << m.algorithms[i];
      for (std::size_t j = 0; j < m.algorithms.size(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.6f", s.nemenyi_p.at(i, j));
        f << ',' << buf;
      }
      f << '\n';
    }
  }
  {
    std::vector<double> mean_auc(m.algorithms.size(), 0.0);
    for (std::size_t a = 0; a < m.algorithms.size(); ++a) {
      for (std::size_t j = 0; j < m.datasets.size(); ++j) {
        mean_auc[a] += m.values.at(a, j);
      }
      mean_auc[a] /= static_cast<double>(m.datasets.size());
    }
    const SummaryTable table =
        significance_table(s.nemenyi_p, mean_auc, s.friedman.mean_ranks, m.algorithms);
    std::ofstream f(out_dir / "significance.txt");
    char buf[64];
    if (s.saturated) {
      f << "Iman-Davenport statistic: saturated (complete rank separation)\n\n";
    } else {
      std::snprintf(buf, sizeof(buf), "%.3f", s.iman_davenport_f);
      f << "Iman-Davenport statistic: " << buf << '\n' << '\n';
    }
    f << table.to_ascii();
  }
}

void emit_report(const AucMatrix& m, const std::filesystem::path& out_dir,
                 const std::string& format) {
  std::filesystem::create_directories(out_dir);
  const Matrix pct = percent_of_max(m);
  const std::size_t n_alg = m.algorithms.size(), n_ds = m.datasets.size();

  struct Box {
    double q1, median, q3, lo_whisker, hi_whisker;
    std::vector<double> fliers;
  };
  std::vector<Box> boxes(n_alg);
  for (std::size_t a = 0; a < n_alg; ++a) {
    std::vector<double> row(n_ds);
    for (std::size_t j = 0; j < n_ds; ++j) row[j] = pct.at(a, j);
    std::sort(row.begin(), row.end());
    Box& b = boxes[a];
    b.q1 = quantile_sorted(row, 0.25);
    b.median = quantile_sorted(row, 0.5);
    b.q3 = quantile_sorted(row, 0.75);
    const double iqr = b.q3 - b.q1;
    const double lo_fence = b.q1 - 1.5 * iqr, hi_fence = b.q3 + 1.5 * iqr;
    b.lo_whisker = b.q3;
    b.hi_whisker = b.q1;
    for (double v : row) {
      if (v < lo_fence || v > hi_fence) {
        b.fliers.push_back(v);
      } else {
        b.lo_whisker = std::min(b.lo_whisker, v);
        b.hi_whisker = std::max(b.hi_whisker, v);
      }
    }
  }

  {
    std::ofstream f(out_dir / "boxplot.csv");
    f << "algorithm,q1,median,q3,lo_whisker,hi_whisker,fliers\n";
    char buf[32];
    for (std::size_t a = 0; a < n_alg; ++a) {
      const Box& b = boxes[a];
      f << m.algorithms[a];
      for (double v : {b.q1, b.median, b.q3, b.lo_whisker, b.hi_whisker}) {
        std::snprintf(buf, sizeof(buf), "%.4f", v);
        f << ',' << buf;
      }
      f << ',';
      for (std::size_t t = 0; t < b.fliers.size(); ++t) {
        std::snprintf(buf, sizeof(buf), "%.4f", b.fliers[t]);
        f << (t ? ";" : "") << buf;
      }
      f << '\n';
    }
  }
  if (m.algorithms.size() >= 2) emit_stats(m, out_dir);

  if (format == "svg") {
    const double row_h = 22.0, left = 110.0, width = 560.0, pad = 8.0;
    const double plot_w = width - left - pad;
    const auto sx = [&](double v) { return left + plot_w * v / 100.0; };
    std::ofstream svg(out_dir / "boxplot.svg");
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << row_h * static_cast<double>(n_alg) + 2 * pad
        << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
    for (std::size_t a = 0; a < n_alg; ++a) {
      const Box& b = boxes[a];
      const double y = pad + row_h * static_cast<double>(a) + row_h / 2.0;
      svg << "<text x=\"2\" y=\"" << y + 3 << "\">" << m.algorithms[a] << "</text>\n";
      svg << "<line x1=\"" << sx(b.lo_whisker) << "\" y1=\"" << y << "\" x2=\""
          << sx(b.hi_whisker) << "\" y2=\"" << y << "\" stroke=\"#555\"/>\n";
      svg << "<rect x=\"" << sx(b.q1) << "\" y=\"" << y - 6 << "\" width=\""
          << sx(b.q3) - sx(b.q1) << "\" height=\"12\" fill=\"#9ecae1\" stroke=\"#333\"/>\n";
      svg << "<line x1=\"" << sx(b.median) << "\" y1=\"" << y - 6 << "\" x2=\""
          << sx(b.median) << "\" y2=\"" << y + 6 << "\" stroke=\"#333\"/>\n";
      for (double v : b.fliers) {
        svg << "<circle cx=\"" << sx(v) << "\" cy=\"" << y << "\" r=\"2\" fill=\"#d62728\"/>\n";
      }
    }
    svg << "</svg>\n";
  }
}

}  // namespace odbench
