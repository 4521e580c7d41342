#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "odbench/types.hpp"

namespace odbench {

/// CSV interchange: one header row naming the feature columns; values as
/// decimal text; an optional final column named `label` holding 0/1.
Dataset read_dataset_csv(const std::filesystem::path& path, const std::string& name);
void write_dataset_csv(const Dataset& ds, const std::filesystem::path& path);

struct ManifestEntry {
  std::string name;
  std::string path;
  bool invert_labels = false;
  bool exclude = false;
};

/// Manifest: JSON array of {name, path, invert_labels, exclude}.
/// Relative CSV paths resolve against the manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

/// AUC matrix as CSV: header `algorithm,<dataset...>`, 6-decimal entries.
void write_auc_matrix_csv(const AucMatrix& m, const std::filesystem::path& path);
AucMatrix read_auc_matrix_csv(const std::filesystem::path& path);

std::string format_double(double v, int significant_digits);

}  // namespace odbench
