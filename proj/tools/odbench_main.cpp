#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "odbench/clustermap.hpp"
#include "odbench/harness.hpp"
#include "odbench/io.hpp"
#include "odbench/synthgen.hpp"

namespace {

int threads_from_env() {
  const char* env = std::getenv("ODBENCH_THREADS");
  if (!env) return 0;
  const int v = std::atoi(env);
  return v > 0 ? v : 0;
}

std::vector<odbench::Algorithm> parse_algorithms(const std::string& csv) {
  if (csv.empty()) return odbench::all_algorithms();
  std::vector<odbench::Algorithm> out;
  std::string cur;
  for (char c : csv + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(odbench::algorithm_from_name(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"odbench: unsupervised anomaly detection benchmark"};
  app.require_subcommand(1);

  // ---- run ----
  auto* run = app.add_subcommand("run", "run the detector benchmark over a manifest");
  std::string manifest, out_dir = "results", algorithms_csv;
  std::uint64_t seed = 1;
  int threads = threads_from_env();
  std::size_t repeats = 5;
  bool apply_diag = false, keep_going = false;
  run->add_option("--manifest", manifest, "dataset manifest JSON")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--algorithms", algorithms_csv, "comma-separated algorithm names");
  run->add_option("--seed", seed, "master seed");
  run->add_option("--threads", threads, "worker threads (0 = default)");
  run->add_option("--repeats", repeats, "repetitions for randomized detectors");
  run->add_flag("--apply-diagnostics", apply_diag,
                "drop excluded datasets and invert flagged ones in the output");
  run->add_flag("--keep-going", keep_going, "record failures and continue");

  // ---- stats ----
  auto* stats = app.add_subcommand("stats", "rank statistics from an AUC matrix");
  std::string stats_matrix, stats_out = "results";
  stats->add_option("--matrix", stats_matrix, "auc_matrix.csv path")->required();
  stats->add_option("--out", stats_out, "output directory");

  // ---- clustermap ----
  auto* cmap = app.add_subcommand("clustermap", "two-way clustering of an AUC matrix");
  std::string cmap_matrix, cmap_out = "results";
  cmap->add_option("--matrix", cmap_matrix, "auc_matrix.csv path")->required();
  cmap->add_option("--out", cmap_out, "output directory");

  // ---- synth ----
  auto* synth = app.add_subcommand("synth", "generate a synthetic archetype dataset");
  std::string archetype = "global", synth_out = "synthetic.csv";
  std::size_t synth_n = 1000, synth_d = 2;
  double contamination = 0.05;
  std::uint64_t synth_seed = 1;
  synth->add_option("--archetype", archetype,
                    "enclosed|peripheral|global|local|isolated|clustered|univariate|multivariate");
  synth->add_option("--n", synth_n, "sample count");
  synth->add_option("--d", synth_d, "dimensions (>= 2)");
  synth->add_option("--contamination", contamination, "anomaly fraction in (0, 0.5)");
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--out", synth_out, "output CSV path");

  // ---- report ----
  auto* report = app.add_subcommand("report", "boxplot/significance report from a run");
  std::string report_matrix, report_out = "results", format = "csv";
  report->add_option("--matrix", report_matrix, "auc_matrix.csv path")->required();
  report->add_option("--out", report_out, "output directory");
  report->add_option("--format", format, "csv|svg")->check(CLI::IsMember({"csv", "svg"}));

  // ---- validate ----
  auto* validate = app.add_subcommand("validate", "ingest and preprocess a manifest");
  std::string val_manifest;
  bool val_keep_going = false;
  validate->add_option("--manifest", val_manifest, "dataset manifest JSON")->required();
  validate->add_flag("--keep-going", val_keep_going, "report failures and continue");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      odbench::RunConfig config;
      config.manifest_path = manifest;
      config.out_dir = out_dir;
      config.algorithms = parse_algorithms(algorithms_csv);
      config.master_seed = seed;
      config.threads = threads;
      config.repeats = repeats;
      config.apply_diagnostics = apply_diag;
      config.keep_going = keep_going;
      const auto result = odbench::run_benchmark(config);
      std::cout << "wrote " << out_dir << "/auc_matrix.csv ("
                << result.matrix.algorithms.size() << " algorithms x "
                << result.matrix.datasets.size() << " datasets)\n";
      if (!result.complete) {
        std::cerr << "run finished with gaps; see grid_detail.json\n";
        return 1;
      }
    } else if (*stats) {
      const auto m = odbench::read_auc_matrix_csv(stats_matrix);
      odbench::emit_stats(m, stats_out);
      std::cout << "wrote ranks.csv, nemenyi.csv, significance.txt to " << stats_out << "\n";
    } else if (*cmap) {
      const auto m = odbench::read_auc_matrix_csv(cmap_matrix);
      std::filesystem::create_directories(cmap_out);
      const auto dist_rows = odbench::pearson_distance_matrix(m.values);
      odbench::Matrix transposed(m.datasets.size(), m.algorithms.size());
      for (std::size_t i = 0; i < m.algorithms.size(); ++i) {
        for (std::size_t j = 0; j < m.datasets.size(); ++j) {
          transposed.at(j, i) = m.values.at(i, j);
        }
      }
      const auto dist_cols = odbench::pearson_distance_matrix(transposed);
      odbench::write_dendrogram_json(odbench::average_linkage(dist_rows), m.algorithms,
                                     (std::filesystem::path(cmap_out) /
                                      "dendrogram_algorithms.json").string());
      odbench::write_dendrogram_json(odbench::average_linkage(dist_cols), m.datasets,
                                     (std::filesystem::path(cmap_out) /
                                      "dendrogram_datasets.json").string());
      odbench::write_clustermap_svg(m, (std::filesystem::path(cmap_out) /
                                        "clustermap.svg").string());
      std::cout << "wrote dendrograms and clustermap.svg to " << cmap_out << "\n";
    } else if (*synth) {
      odbench::ArchetypeSpec spec;
      spec.archetype = odbench::archetype_from_name(archetype);
      spec.n = synth_n;
      spec.d = synth_d;
      spec.contamination = contamination;
      spec.seed = synth_seed;
      const auto ds = odbench::generate_archetype(spec);
      odbench::write_dataset_csv(ds, synth_out);
      std::ofstream sidecar(synth_out + ".json");
      sidecar << odbench::archetype_params_json(spec) << '\n';
      std::cout << "wrote " << synth_out << " and " << synth_out << ".json\n";
    } else if (*report) {
      const auto m = odbench::read_auc_matrix_csv(report_matrix);
      odbench::emit_report(m, report_out, format);
      std::cout << "wrote report files to " << report_out << "\n";
    } else if (*validate) {
      std::vector<std::string> errors;
      const auto loaded =
          odbench::load_manifest_datasets(val_manifest, val_keep_going, &errors);
      for (const auto& ld : loaded) {
        std::cout << ld.data.name << ": " << ld.data.features.rows() << " samples, "
                  << ld.data.features.cols() << " variables, "
                  << ld.report.duplicates_removed << " duplicates removed, "
                  << ld.report.columns_dropped.size() << " columns dropped\n";
      }
      for (const auto& e : errors) std::cerr << "error: " << e << '\n';
      if (!errors.empty()) return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
