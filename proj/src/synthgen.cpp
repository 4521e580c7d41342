#include "odbench/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "odbench/preprocess.hpp"
#include "odbench/rng.hpp"

namespace odbench {

namespace {

// construction constants; recorded in the sidecar metadata
constexpr double kGlobalShellLo = 6.0, kGlobalShellHi = 10.0;
// the wide cluster must be sparser than the anomaly ring, otherwise the
// ring reads as a globally separable structure rather than a local one
constexpr double kLocalWideSigma = 10.0, kLocalCenterGap = 40.0;
constexpr double kLocalAnomalyLo = 3.0, kLocalAnomalyHi = 5.0;
constexpr double kClusteredOffset = 6.0, kClusteredSigma = 0.25;
constexpr double kEnclosedAnnulusLo = 3.0, kEnclosedAnnulusHi = 5.0;
constexpr double kEnclosedCoreRadius = 1.5;
constexpr double kIsolatedLo = 6.0, kIsolatedHi = 9.0, kIsolatedMinGap = 2.0;
constexpr double kUnivariateIqrShift = 6.0;
constexpr double kMultivariateRho = 0.9;

void unit_direction(Rng& rng, std::span<double> out) {
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& v : out) {
      v = rng.next_normal();
      norm2 += v * v;
    }
  } while (norm2 <= 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& v : out) v *= inv;
}

void gaussian_point(Rng& rng, std::span<double> out, double sigma) {
  for (double& v : out) v = sigma * rng.next_normal();
}

struct Rows {
  std::vector<std::vector<double>> normals, anomalies;
};

Rows make_global(std::size_t n_norm, std::size_t n_anom, std::size_t d, Rng& rng) {
  Rows r;
  for (std::size_t i = 0; i < n_norm; ++i) {
    std::vector<double> p(d);
    gaussian_point(rng, p, 1.0);
    r.normals.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < n_anom; ++i) {
    std::vector<double> p(d);
    unit_direction(rng, p);
    const double radius = kGlobalShellLo + rng.next_double() * (kGlobalShellHi - kGlobalShellLo);
    for (double& v : p) v *= radius;
    r.anomalies.push_back(std::move(p));
  }
  return r;
}

Rows make_local(std::size_t n_norm, std::size_t n_anom, std::size_t d, Rng& rng) {
  Rows r;
  const std::size_t tight = n_norm / 2;
  for (std::size_t i = 0; i < n_norm; ++i) {
    std::vector<double> p(d);
    if (i < tight) {
      gaussian_point(rng, p, 1.0);
    } else {
      gaussian_point(rng, p, kLocalWideSigma);
      p[0] += kLocalCenterGap;
    }
    r.normals.push_back(std::move(p));
  }
  // anomalies ring the tight cluster: sparse next to it, unremarkable
  // at the scale of the wide cluster
  for (std::size_t i = 0; i < n_anom; ++i) {
    std::vector<double> p(d);
    unit_direction(rng, p);
    const double radius =
        kLocalAnomalyLo + rng.next_double() * (kLocalAnomalyHi - kLocalAnomalyLo);
    for (double& v : p) v *= radius;
    r.anomalies.push_back(std::move(p));
  }
  return r;
}

Rows make_clustered(std::size_t n_norm, std::size_t n_anom, std::size_t d, Rng& rng) {
  Rows r;
  for (std::size_t i = 0; i < n_norm; ++i) {
    std::vector<double> p(d);
    gaussian_point(rng, p, 1.0);
    r.normals.push_back(std::move(p));
  }
  std::vector<double> center(d);
  unit_direction(rng, center);
  for (double& v : center) v *= kClusteredOffset;
  for (std::size_t i = 0; i < n_anom; ++i) {
    std::vector<double> p(d);
    gaussian_point(rng, p, kClusteredSigma);
    for (std::size_t j = 0; j < d; ++j) p[j] += center[j];
    r.anomalies.push_back(std::move(p));
  }
  return r;
}

Rows make_enclosed(std::size_t n_norm, std::size_t n_anom, std::size_t d, Rng& rng) {
  Rows r;
  for (std::size_t i = 0; i < n_norm; ++i) {
    std::vector<double> p(d, 0.0);
    const double angle = rng.next_double() * 2.0 * 3.14159265358979323846;
    const double radius =
        kEnclosedAnnulusLo + rng.next_double() * (kEnclosedAnnulusHi - kEnclosedAnnulusLo);
    p[0] = radius * std::cos(angle);
    p[1] = radius * std::sin(angle);
    for (std::size_t j = 2; j < d; ++j) p[j] = 0.5 * rng.next_normal();
    r.normals.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < n_anom; ++i) {
    std::vector<double> p(d, 0.0);
    // rejection-sample the central disk
    double x0, x1;
    do {
      x0 = (2.0 * rng.next_double() - 1.0) * kEnclosedCoreRadius;
      x1 = (2.0 * rng.next_double() - 1.0) * kEnclosedCoreRadius;
    } while (x0 * x0 + x1 * x1 > kEnclosedCoreRadius * kEnclosedCoreRadius);
    p[0] = x0;
    p[1] = x1;
    for (std::size_t j = 2; j < d; ++j) p[j] = 0.25 * rng.next_normal();
    r.anomalies.push_back(std::move(p));
  }
  return r;
}

Rows make_peripheral(std::size_t n_norm, std::size_t n_anom, std::size_t d, Rng& rng) {
  Rows r;
  for (std::size_t i = 0; i < n_norm; ++i) {
    std::vector<double> p(d);
    for (double& v : p) v = rng.next_double();
    r.normals.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < n_anom; ++i) {
    std::vector<double> p(d);
    for (double& v : p) v = rng.next_double();
    const auto j = static_cast<std::size_t>(rng.next_below(d));
    const double shift = 0.1 + 0.4 * rng.next_double();
    p[j] = rng.next_double() < 0.5 ? 1.0 + shift : -shift;  // outside [0,1]
    r.anomalies.push_back(std::move(p));
  }
  return r;
}

Rows make_isolated(std::size_t n_norm, std::size_t n_anom, std::size_t d, Rng& rng) {
  Rows r;
  for (std::size_t i = 0; i < n_norm; ++i) {
    std::vector<double> p(d);
    gaussian_point(rng, p, 1.0);
    r.normals.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < n_anom; ++i) {
    std::vector<double> p(d);
    for (int attempt = 0; attempt < 1000; ++attempt) {
      unit_direction(rng, p);
      const double radius = kIsolatedLo + rng.next_double() * (kIsolatedHi - kIsolatedLo);
      for (double& v : p) v *= radius;
      bool apart = true;
      for (const auto& q : r.anomalies) {
        if (euclidean_distance(p, q) < kIsolatedMinGap) {
          apart = false;
          break;
        }
      }
      if (apart) break;
    }
    r.anomalies.push_back(p);
  }
  return r;
}

Rows make_univariate(std::size_t n_norm, std::size_t n_anom, std::size_t d, Rng& rng) {
  Rows r;
  for (std::size_t i = 0; i < n_norm; ++i) {
    std::vector<double> p(d);
    gaussian_point(rng, p, 1.0);
    r.normals.push_back(std::move(p));
  }
  // per-feature median and IQR of the normals fix the anomalous offset
  std::vector<double> med(d), iqr(d), col(n_norm);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n_norm; ++i) col[i] = r.normals[i][j];
    std::sort(col.begin(), col.end());
    med[j] = quantile_sorted(col, 0.5);
    iqr[j] = quantile_sorted(col, 0.75) - quantile_sorted(col, 0.25);
  }
  for (std::size_t i = 0; i < n_anom; ++i) {
    std::vector<double> p(d);
    gaussian_point(rng, p, 1.0);
    const auto j = static_cast<std::size_t>(rng.next_below(d));
    const double sign = rng.next_double() < 0.5 ? -1.0 : 1.0;
    p[j] = med[j] + sign * kUnivariateIqrShift * iqr[j];
    r.anomalies.push_back(std::move(p));
  }
  return r;
}

Rows make_multivariate(std::size_t n_norm, std::size_t n_anom, std::size_t d, Rng& rng) {
  Rows r;
  const double shared_w = std::sqrt(kMultivariateRho);
  const double own_w = std::sqrt(1.0 - kMultivariateRho);
  const auto draw = [&](std::vector<double>& p) {
    const double shared = rng.next_normal();
    for (double& v : p) v = shared_w * shared + own_w * rng.next_normal();
  };
  for (std::size_t i = 0; i < n_norm; ++i) {
    std::vector<double> p(d);
    draw(p);
    r.normals.push_back(std::move(p));
  }

  // empirical box and Mahalanobis threshold of the normals
  std::vector<double> lo(d), hi(d);
  for (std::size_t j = 0; j < d; ++j) {
    lo[j] = hi[j] = r.normals[0][j];
    for (const auto& p : r.normals) {
      lo[j] = std::min(lo[j], p[j]);
      hi[j] = std::max(hi[j], p[j]);
    }
  }
  Eigen::MatrixXd data(n_norm, d);
  for (std::size_t i = 0; i < n_norm; ++i) {
    for (std::size_t j = 0; j < d; ++j) data(i, j) = r.normals[i][j];
  }
  const Eigen::RowVectorXd mean = data.colwise().mean();
  const Eigen::MatrixXd centered = data.rowwise() - mean;
  Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(n_norm - 1);
  cov.diagonal().array() += 1e-9;
  const Eigen::MatrixXd cov_inv = cov.inverse();
  const auto mahal2 = [&](const std::vector<double>& p) {
    Eigen::VectorXd v(d);
    for (std::size_t j = 0; j < d; ++j) v[static_cast<Eigen::Index>(j)] = p[j] - mean[static_cast<Eigen::Index>(j)];
    return v.dot(cov_inv * v);
  };
  std::vector<double> normal_m2(n_norm);
  for (std::size_t i = 0; i < n_norm; ++i) normal_m2[i] = mahal2(r.normals[i]);
  std::sort(normal_m2.begin(), normal_m2.end());
  const double threshold = quantile_sorted(normal_m2, 0.99);

  // flip one coordinate of a typical point: marginals stay inside the
  // box while the dependence pattern breaks
  for (std::size_t i = 0; i < n_anom; ++i) {
    std::vector<double> p(d);
    for (int attempt = 0; attempt < 2000; ++attempt) {
      draw(p);
      const auto j = static_cast<std::size_t>(rng.next_below(d));
      p[j] = -p[j];
      bool in_box = true;
      for (std::size_t t = 0; t < d && in_box; ++t) {
        in_box = p[t] >= lo[t] && p[t] <= hi[t];
      }
      if (in_box && mahal2(p) > threshold) break;
    }
    r.anomalies.push_back(std::move(p));
  }
  return r;
}

}  // namespace

const char* archetype_name(Archetype a) {
  switch (a) {
    case Archetype::kEnclosed: return "enclosed";
    case Archetype::kPeripheral: return "peripheral";
    case Archetype::kGlobal: return "global";
    case Archetype::kLocal: return "local";
    case Archetype::kIsolated: return "isolated";
    case Archetype::kClustered: return "clustered";
    case Archetype::kUnivariate: return "univariate";
    case Archetype::kMultivariate: return "multivariate";
  }
  return "global";
}

Archetype archetype_from_name(const std::string& name) {
  for (Archetype a :
       {Archetype::kEnclosed, Archetype::kPeripheral, Archetype::kGlobal,
        Archetype::kLocal, Archetype::kIsolated, Archetype::kClustered,
        Archetype::kUnivariate, Archetype::kMultivariate}) {
    if (name == archetype_name(a)) return a;
  }
  throw std::invalid_argument("unknown archetype: " + name);
}

Dataset generate_archetype(const ArchetypeSpec& spec) {
  if (spec.d < 2) throw std::invalid_argument("archetype: need d >= 2");
  if (spec.contamination <= 0.0 || spec.contamination >= 0.5) {
    throw std::invalid_argument("archetype: contamination must lie in (0, 0.5)");
  }
  const auto n_anom = static_cast<std::size_t>(
      std::llround(spec.contamination * static_cast<double>(spec.n)));
  if (n_anom < 1) throw std::invalid_argument("archetype: contamination*n < 1");
  const std::size_t n_norm = spec.n - n_anom;

  Rng rng(mix_seed(spec.seed, hash_string(archetype_name(spec.archetype))));
  Rows rows;
  switch (spec.archetype) {
    case Archetype::kEnclosed: rows = make_enclosed(n_norm, n_anom, spec.d, rng); break;
    case Archetype::kPeripheral: rows = make_peripheral(n_norm, n_anom, spec.d, rng); break;
    case Archetype::kGlobal: rows = make_global(n_norm, n_anom, spec.d, rng); break;
    case Archetype::kLocal: rows = make_local(n_norm, n_anom, spec.d, rng); break;
    case Archetype::kIsolated: rows = make_isolated(n_norm, n_anom, spec.d, rng); break;
    case Archetype::kClustered: rows = make_clustered(n_norm, n_anom, spec.d, rng); break;
    case Archetype::kUnivariate: rows = make_univariate(n_norm, n_anom, spec.d, rng); break;
    case Archetype::kMultivariate: rows = make_multivariate(n_norm, n_anom, spec.d, rng); break;
  }

  // interleave deterministically so the file is not label-sorted
  std::vector<std::size_t> perm(spec.n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = spec.n - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.next_below(i + 1));
    std::swap(perm[i], perm[j]);
  }

  Dataset ds;
  ds.name = std::string(archetype_name(spec.archetype)) + "_" + std::to_string(spec.seed);
  ds.features = Matrix(spec.n, spec.d);
  std::vector<int> labels(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const std::size_t src = perm[i];
    const bool anom = src >= n_norm;
    const auto& p = anom ? rows.anomalies[src - n_norm] : rows.normals[src];
    std::copy(p.begin(), p.end(), ds.features.row(i).begin());
    labels[i] = anom ? 1 : 0;
  }
  ds.labels = std::move(labels);
  return ds;
}

std::string archetype_params_json(const ArchetypeSpec& spec) {
  nlohmann::ordered_json j;
  j["archetype"] = archetype_name(spec.archetype);
  j["n"] = spec.n;
  j["d"] = spec.d;
  j["contamination"] = spec.contamination;
  j["seed"] = spec.seed;
  nlohmann::ordered_json c;
  switch (spec.archetype) {
    case Archetype::kGlobal:
      c = {{"normal", "isotropic gaussian, sigma 1"},
           {"anomaly_shell", {kGlobalShellLo, kGlobalShellHi}}};
      break;
    case Archetype::kLocal:
      c = {{"tight_sigma", 1.0},
           {"wide_sigma", kLocalWideSigma},
           {"center_gap", kLocalCenterGap},
           {"anomaly_radius", {kLocalAnomalyLo, kLocalAnomalyHi}}};
      break;
    case Archetype::kClustered:
      c = {{"offset_sigmas", kClusteredOffset}, {"cluster_sigma", kClusteredSigma}};
      break;
    case Archetype::kEnclosed:
      c = {{"annulus", {kEnclosedAnnulusLo, kEnclosedAnnulusHi}},
           {"core_radius", kEnclosedCoreRadius}};
      break;
    case Archetype::kPeripheral:
      c = {{"normal_box", "[0,1]^d"}, {"outside_margin", {0.1, 0.5}}};
      break;
    case Archetype::kIsolated:
      c = {{"radius", {kIsolatedLo, kIsolatedHi}}, {"min_gap", kIsolatedMinGap}};
      break;
    case Archetype::kUnivariate:
      c = {{"iqr_shift", kUnivariateIqrShift}};
      break;
    case Archetype::kMultivariate:
      c = {{"rho", kMultivariateRho}, {"construction", "one coordinate negated"}};
      break;
  }
  j["construction"] = std::move(c);
  return j.dump(2);
}

}  // namespace odbench
