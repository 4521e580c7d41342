#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "odbench/evaluation.hpp"
#include "odbench/preprocess.hpp"
#include "odbench/registry.hpp"
#include "odbench/types.hpp"

namespace odbench {

struct RunConfig {
  std::string manifest_path;
  std::string out_dir;
  std::vector<Algorithm> algorithms = all_algorithms();
  std::uint64_t master_seed = 1;
  int threads = 0;            // 0 = library default
  std::size_t repeats = 5;    // random-detector repetitions per grid point
  bool apply_diagnostics = false;
  bool keep_going = false;
};

struct GridResult {
  std::string algorithm;
  std::string dataset;
  std::vector<double> per_setting_auc;  // grid order; repeat-averaged
  double mean_auc = 0.0;
  std::vector<std::string> errors;      // annotated failing grid points
};

/// Stable per-task seed: master seed folded with algorithm, dataset, grid
/// index and repeat index.
std::uint64_t task_seed(std::uint64_t master, Algorithm a, const std::string& dataset,
                        std::size_t grid_index, std::size_t repeat);

/// Evaluates every grid point of `algorithm` on the full preprocessed
/// dataset (no train/test split) and averages the per-setting AUCs.
GridResult grid_average(Algorithm algorithm, const Dataset& preprocessed,
                        std::uint64_t master_seed, std::size_t repeats,
                        bool keep_going = false);

struct LoadedDataset {
  Dataset data;  // validated, preprocessed, labels inverted when flagged
  PreprocessReport report;
};

/// Ingests, validates and preprocesses every manifest entry. With
/// keep_going, failures are reported and skipped instead of thrown.
std::vector<LoadedDataset> load_manifest_datasets(
    const std::filesystem::path& manifest, bool keep_going,
    std::vector<std::string>* errors = nullptr);

struct BenchmarkOutput {
  AucMatrix matrix;
  std::vector<GridResult> details;
  std::vector<std::pair<std::string, DatasetDiagnosis>> diagnostics;
  bool complete = true;
};

/// The full pipeline: load manifest, run every (algorithm, dataset) grid,
/// diagnose datasets, and write auc_matrix.csv, grid_detail.json,
/// run_metadata.json plus per-dataset preprocessing reports into out_dir.
BenchmarkOutput run_benchmark(const RunConfig& config);

/// Rank statistics artifacts (ranks.csv, nemenyi.csv, significance.txt)
/// from an AUC matrix.
void emit_stats(const AucMatrix& m, const std::filesystem::path& out_dir);

/// Percent-of-max boxplot data (quartiles, 1.5 IQR whiskers, fliers) and
/// the significance table; "svg" adds boxplot graphics.
void emit_report(const AucMatrix& m, const std::filesystem::path& out_dir,
                 const std::string& format);

}  // namespace odbench
