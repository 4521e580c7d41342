#include "odbench/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace odbench {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, const std::string& context) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE) {
    throw std::runtime_error(context + ": cannot parse value '" + s + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v, int significant_digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, v);
  return buf;
}

Dataset read_dataset_csv(const std::filesystem::path& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CSV file: " + path.string());

  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path.string() + ": empty file");
  }
  const auto header = split_csv_line(line);
  const bool has_label = !header.empty() && header.back() == "label";
  const std::size_t d = header.size() - (has_label ? 1 : 0);
  if (d == 0) throw std::runtime_error(path.string() + ": no feature columns");

  std::vector<double> values;
  std::vector<int> labels;
  std::size_t n = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected " + std::to_string(header.size()) +
                               " fields, got " + std::to_string(fields.size()));
    }
    const std::string ctx = path.string() + ":" + std::to_string(lineno);
    for (std::size_t j = 0; j < d; ++j) {
      values.push_back(parse_double(fields[j], ctx));
    }
    if (has_label) {
      const double raw = parse_double(fields[d], ctx);
      if (raw != 0.0 && raw != 1.0) {
        throw std::runtime_error(ctx + ": label outside {0,1}");
      }
      labels.push_back(static_cast<int>(raw));
    }
    ++n;
  }

  Dataset ds;
  ds.name = name;
  ds.features = Matrix(n, d, std::move(values));
  if (has_label) ds.labels = std::move(labels);
  return ds;
}

void write_dataset_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write CSV file: " + path.string());
  const Matrix& x = ds.features;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    if (j) out << ',';
    out << 'f' << j;
  }
  if (ds.labels) out << ",label";
  out << '\n';
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      if (j) out << ',';
      out << format_double(x.at(i, j), 12);
    }
    if (ds.labels) out << ',' << (*ds.labels)[i];
    out << '\n';
  }
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path.string());
  nlohmann::json j;
  in >> j;
  if (!j.is_array()) throw std::runtime_error(path.string() + ": manifest must be a JSON array");

  const auto base = path.parent_path();
  std::vector<ManifestEntry> entries;
  for (const auto& e : j) {
    ManifestEntry m;
    m.name = e.at("name").get<std::string>();
    std::filesystem::path p = e.at("path").get<std::string>();
    if (p.is_relative()) p = base / p;
    m.path = p.string();
    m.invert_labels = e.value("invert_labels", false);
    m.exclude = e.value("exclude", false);
    entries.push_back(std::move(m));
  }
  return entries;
}

void write_auc_matrix_csv(const AucMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write: " + path.string());
  out << "algorithm";
  for (const auto& dname : m.datasets) out << ',' << dname;
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < m.algorithms.size(); ++i) {
    out << m.algorithms[i];
    for (std::size_t jcol = 0; jcol < m.datasets.size(); ++jcol) {
      std::snprintf(buf, sizeof(buf), "%.6f", m.values.at(i, jcol));
      out << ',' << buf;
    }
    out << '\n';
  }
}

AucMatrix read_auc_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  auto header = split_csv_line(line);
  if (header.size() < 2) throw std::runtime_error(path.string() + ": need at least one dataset column");

  AucMatrix m;
  m.datasets.assign(header.begin() + 1, header.end());
  std::vector<double> values;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": ragged row");
    }
    m.algorithms.push_back(fields[0]);
    for (std::size_t j = 1; j < fields.size(); ++j) {
      values.push_back(parse_double(fields[j], path.string() + ":" + std::to_string(lineno)));
    }
  }
  m.values = Matrix(m.algorithms.size(), m.datasets.size(), std::move(values));
  return m;
}

}  // namespace odbench
