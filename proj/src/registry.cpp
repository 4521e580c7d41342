#include "odbench/registry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "odbench/detectors/isolation.hpp"
#include "odbench/detectors/proximity.hpp"
#include "odbench/detectors/statistical.hpp"

namespace odbench {

namespace {

const std::vector<std::size_t> kKnnGrid = [] {
  std::vector<std::size_t> g;
  for (std::size_t k = 5; k <= 30; ++k) g.push_back(k);
  return g;
}();
const std::vector<std::size_t> kCofGrid = {5, 10, 15, 20, 25, 30};
const std::vector<std::size_t> kSubsampleGrid = {128, 256, 512, 1024};
const std::vector<std::size_t> kExtensionGrid = {1, 2, 3};
const std::vector<double> kAlphaGrid = {0.7, 0.8, 0.9};
const std::vector<double> kBetaGrid = {3.0, 5.0, 7.0};
const std::vector<double> kPcaGrid = {0.3, 0.5, 0.7, 0.9};

double param(const DetectorSpec& spec, const std::string& key) {
  const auto it = spec.params.find(key);
  if (it == spec.params.end()) {
    throw std::invalid_argument(algorithm_name(spec.algorithm) +
                                ": missing parameter '" + key + "'");
  }
  return it->second;
}

std::size_t param_index(const DetectorSpec& spec, const std::string& key) {
  const double v = param(spec, key);
  const auto s = static_cast<std::size_t>(std::llround(v));
  if (static_cast<double>(s) != v) {
    throw std::invalid_argument(algorithm_name(spec.algorithm) + ": parameter '" +
                                key + "' must be an integer");
  }
  return s;
}

}  // namespace

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> all = {
      Algorithm::kAbod,  Algorithm::kCblof, Algorithm::kCof,
      Algorithm::kCopod, Algorithm::kEcod,  Algorithm::kEif,
      Algorithm::kEnsembleLof, Algorithm::kGmm, Algorithm::kHbos,
      Algorithm::kIf,    Algorithm::kInne,  Algorithm::kKde,
      Algorithm::kKnn,   Algorithm::kKthnn, Algorithm::kLoda,
      Algorithm::kLof,   Algorithm::kOdin,  Algorithm::kPca,
      Algorithm::kUCblof};
  return all;
}

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kAbod: return "ABOD";
    case Algorithm::kCblof: return "CBLOF";
    case Algorithm::kCof: return "COF";
    case Algorithm::kCopod: return "COPOD";
    case Algorithm::kEcod: return "ECOD";
    case Algorithm::kEif: return "EIF";
    case Algorithm::kEnsembleLof: return "ensemble-LOF";
    case Algorithm::kGmm: return "GMM";
    case Algorithm::kHbos: return "HBOS";
    case Algorithm::kIf: return "IF";
    case Algorithm::kInne: return "INNE";
    case Algorithm::kKde: return "KDE";
    case Algorithm::kKnn: return "kNN";
    case Algorithm::kKthnn: return "kth-NN";
    case Algorithm::kLoda: return "LODA";
    case Algorithm::kLof: return "LOF";
    case Algorithm::kOdin: return "ODIN";
    case Algorithm::kPca: return "PCA";
    case Algorithm::kUCblof: return "u-CBLOF";
  }
  return "?";
}

Algorithm algorithm_from_name(const std::string& name) {
  for (Algorithm a : all_algorithms()) {
    if (algorithm_name(a) == name) return a;
  }
  throw std::invalid_argument("unknown algorithm: " + name);
}

std::vector<DetectorSpec> grid_for(Algorithm a) {
  std::vector<DetectorSpec> grid;
  switch (a) {
    case Algorithm::kKnn:
    case Algorithm::kKthnn:
    case Algorithm::kLof:
    case Algorithm::kOdin:
      for (std::size_t k : kKnnGrid) {
        grid.push_back({a, {{"k", static_cast<double>(k)}}});
      }
      break;
    case Algorithm::kCof:
      for (std::size_t k : kCofGrid) {
        grid.push_back({a, {{"k", static_cast<double>(k)}}});
      }
      break;
    case Algorithm::kCblof:
    case Algorithm::kUCblof:
      for (std::size_t k = 2; k <= 14; ++k) {
        for (double alpha : kAlphaGrid) {
          for (double beta : kBetaGrid) {
            grid.push_back({a,
                            {{"k", static_cast<double>(k)},
                             {"alpha", alpha},
                             {"beta", beta}}});
          }
        }
      }
      break;
    case Algorithm::kIf:
      for (std::size_t s : kSubsampleGrid) {
        grid.push_back({a, {{"subsample", static_cast<double>(s)}}});
      }
      break;
    case Algorithm::kEif:
      for (std::size_t s : kSubsampleGrid) {
        for (std::size_t e : kExtensionGrid) {
          grid.push_back({a,
                          {{"subsample", static_cast<double>(s)},
                           {"extension_level", static_cast<double>(e)}}});
        }
      }
      break;
    case Algorithm::kGmm:
      for (std::size_t c = 1; c <= 15; ++c) {
        grid.push_back({a, {{"n_components", static_cast<double>(c)}}});
      }
      break;
    case Algorithm::kPca:
      for (double t : kPcaGrid) {
        grid.push_back({a, {{"variance_threshold", t}}});
      }
      break;
    case Algorithm::kAbod:
    case Algorithm::kCopod:
    case Algorithm::kEcod:
    case Algorithm::kEnsembleLof:
    case Algorithm::kHbos:
    case Algorithm::kInne:
    case Algorithm::kKde:
    case Algorithm::kLoda:
      grid.push_back({a, {}});
      break;
  }
  return grid;
}

bool is_randomized(Algorithm a) {
  switch (a) {
    case Algorithm::kIf:
    case Algorithm::kEif:
    case Algorithm::kInne:
    case Algorithm::kLoda:
    case Algorithm::kGmm:
    case Algorithm::kCblof:
    case Algorithm::kUCblof:
      return true;
    default:
      return false;
  }
}

void validate_spec(const DetectorSpec& spec) {
  const auto grid = grid_for(spec.algorithm);
  for (const auto& g : grid) {
    if (g.params == spec.params) return;
  }
  throw std::invalid_argument(algorithm_name(spec.algorithm) +
                              ": parameters not on the evaluation grid");
}

std::size_t required_neighbors(Algorithm a, std::size_t n) {
  switch (a) {
    case Algorithm::kKnn:
    case Algorithm::kKthnn:
    case Algorithm::kOdin:
    case Algorithm::kCof:
      return std::min<std::size_t>(30, n - 1);
    case Algorithm::kLof:
    case Algorithm::kEnsembleLof:
      // slack so k-distance tie closures stay inside the stored rows
      return std::min<std::size_t>(38, n - 1);
    case Algorithm::kAbod:
      return abod_effective_k(n);
    default:
      return 0;
  }
}

ScoreVector run_detector(const DetectorSpec& spec, const Matrix& x,
                         const NeighborTable* table, std::uint64_t seed) {
  const auto need = required_neighbors(spec.algorithm, x.rows());
  NeighborTable local;
  if (need > 0 && (table == nullptr || table->k_max() < need)) {
    local = build_neighbor_table(x, need);
    table = &local;
  }

  switch (spec.algorithm) {
    case Algorithm::kKnn:
      return knn_score(*table, param_index(spec, "k"));
    case Algorithm::kKthnn:
      return kthnn_score(*table, param_index(spec, "k"));
    case Algorithm::kLof:
      return lof_score(x, *table, param_index(spec, "k"));
    case Algorithm::kEnsembleLof: {
      std::vector<std::size_t> ks;
      for (std::size_t k : kKnnGrid) {
        if (k + 1 < x.rows()) ks.push_back(k);
      }
      return ensemble_lof_score(x, *table, ks);
    }
    case Algorithm::kCof:
      return cof_score(x, *table, param_index(spec, "k"));
    case Algorithm::kOdin:
      return odin_score(*table, param_index(spec, "k"));
    case Algorithm::kAbod:
      return abod_score(x, *table);
    case Algorithm::kIf: {
      IsolationParams p;
      p.subsample = param_index(spec, "subsample");
      p.seed = seed;
      return if_score(x, p);
    }
    case Algorithm::kEif: {
      IsolationParams p;
      p.subsample = param_index(spec, "subsample");
      p.extension_level = param_index(spec, "extension_level");
      p.seed = seed;
      return eif_score(x, p);
    }
    case Algorithm::kInne: {
      IsolationParams p;
      p.seed = seed;
      return inne_score(x, p);
    }
    case Algorithm::kHbos:
      return hbos_score(x);
    case Algorithm::kLoda:
      return loda_score(x, seed);
    case Algorithm::kKde:
      return kde_score(x);
    case Algorithm::kPca:
      return pca_score(x, param(spec, "variance_threshold"));
    case Algorithm::kGmm:
      return gmm_score(x, param_index(spec, "n_components"), seed);
    case Algorithm::kCopod:
      return copod_score(x);
    case Algorithm::kEcod:
      return ecod_score(x);
    case Algorithm::kCblof:
      return cblof_score(x, param_index(spec, "k"), param(spec, "alpha"),
                         param(spec, "beta"), true, seed);
    case Algorithm::kUCblof:
      return cblof_score(x, param_index(spec, "k"), param(spec, "alpha"),
                         param(spec, "beta"), false, seed);
  }
  throw std::logic_error("unreachable detector dispatch");
}

}  // namespace odbench
