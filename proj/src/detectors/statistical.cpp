#include "odbench/detectors/statistical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "odbench/rng.hpp"

namespace odbench {

namespace {

constexpr double kHistEps = 1e-12;

struct Histogram {
  double lo = 0.0;
  double width = 1.0;  // bin width
  std::vector<double> counts;

  std::size_t bin(double v) const {
    if (width <= 0.0) return 0;
    auto b = static_cast<std::ptrdiff_t>((v - lo) / width);
    b = std::clamp<std::ptrdiff_t>(b, 0, static_cast<std::ptrdiff_t>(counts.size()) - 1);
    return static_cast<std::size_t>(b);
  }
};

Histogram fit_histogram(std::span<const double> x, std::size_t bins) {
  Histogram h;
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  h.lo = *lo_it;
  h.width = (*hi_it - *lo_it) / static_cast<double>(bins);
  h.counts.assign(bins, 0.0);
  for (double v : x) h.counts[h.bin(v)] += 1.0;
  return h;
}

// log-likelihood of the sample under the equal-width D-bin histogram
// density, dropping D-independent terms (data rescaled to unit range)
double histogram_log_likelihood(const Histogram& h, std::size_t n) {
  double ll = 0.0;
  const double bins = static_cast<double>(h.counts.size());
  for (double c : h.counts) {
    if (c > 0.0) ll += c * std::log(bins * c / static_cast<double>(n));
  }
  return ll;
}

double skewness_sign(std::span<const double> x) {
  const std::size_t n = x.size();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double m2 = 0.0, m3 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  if (m2 <= 0.0) return 0.0;
  // adjusted Fisher-Pearson; the positive factor cannot change the sign
  const double g1 = m3 / std::pow(m2, 1.5);
  if (g1 > 0.0) return 1.0;
  if (g1 < 0.0) return -1.0;
  return 0.0;
}

// negative log left/right ECDF tails per feature, shared by COPOD/ECOD
struct TailScores {
  Matrix u_left, u_right, u_skew;
};

TailScores ecdf_tails(const Matrix& x) {
  const std::size_t n = x.rows(), d = x.cols();
  TailScores t{Matrix(n, d), Matrix(n, d), Matrix(n, d)};
  std::vector<double> col(n), sorted(n);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = x.at(i, j);
    sorted = col;
    std::sort(sorted.begin(), sorted.end());
    const double skew = skewness_sign(col);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = col[i];
      const auto le = static_cast<double>(
          std::upper_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
      const auto ge = static_cast<double>(
          sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), v));
      const double ul = -std::log(le / static_cast<double>(n));
      const double ur = -std::log(ge / static_cast<double>(n));
      t.u_left.at(i, j) = ul;
      t.u_right.at(i, j) = ur;
      // left tail for left-skewed features, right tail for right-skewed
      if (skew < 0.0) {
        t.u_skew.at(i, j) = ul;
      } else if (skew > 0.0) {
        t.u_skew.at(i, j) = ur;
      } else {
        t.u_skew.at(i, j) = ul + ur;
      }
    }
  }
  return t;
}

double logsumexp(std::span<const double> v) {
  const double hi = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(hi)) return hi;
  double sum = 0.0;
  for (double a : v) sum += std::exp(a - hi);
  return hi + std::log(sum);
}

// distance-weighted seeding for k-means and GMM inits
std::vector<std::size_t> kmeanspp_seeds(const Matrix& x, std::size_t k, Rng& rng) {
  const std::size_t n = x.rows();
  std::vector<std::size_t> centers;
  centers.reserve(k);
  centers.push_back(static_cast<std::size_t>(rng.next_below(n)));
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    d2[i] = squared_distance(x.row(i), x.row(centers[0]));
  }
  while (centers.size() < k) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t pick;
    if (total <= 0.0) {
      pick = static_cast<std::size_t>(rng.next_below(n));
    } else {
      const double target = rng.next_double() * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target) {
          pick = i;
          break;
        }
      }
    }
    centers.push_back(pick);
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(x.row(i), x.row(pick)));
    }
  }
  return centers;
}

struct KMeansResult {
  Matrix centroids;                  // k x d
  std::vector<std::size_t> assign;   // per sample
  std::vector<std::size_t> sizes;    // per cluster
};

KMeansResult kmeans(const Matrix& x, std::size_t k, Rng& rng, std::size_t max_iter) {
  const std::size_t n = x.rows(), d = x.cols();
  const auto seeds = kmeanspp_seeds(x, k, rng);
  Matrix centroids(k, d);
  for (std::size_t c = 0; c < k; ++c) {
    const auto src = x.row(seeds[c]);
    std::copy(src.begin(), src.end(), centroids.row(c).begin());
  }

  std::vector<std::size_t> assign(n, k);  // k = unassigned sentinel
  std::vector<std::size_t> sizes(k, 0);
  const auto reassign = [&]() {
    bool changed = false;
#pragma omp parallel for schedule(static) reduction(|| : changed)
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d2 = squared_distance(x.row(i), centroids.row(0));
      for (std::size_t c = 1; c < k; ++c) {
        const double d2 = squared_distance(x.row(i), centroids.row(c));
        if (d2 < best_d2) {
          best_d2 = d2;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    return changed;
  };

  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    if (!reassign()) break;
    Matrix sums(k, d);
    std::fill(sizes.begin(), sizes.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++sizes[assign[i]];
      const auto src = x.row(i);
      auto dst = sums.row(assign[i]);
      for (std::size_t j = 0; j < d; ++j) dst[j] += src[j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] == 0) continue;  // empty cluster keeps its centroid
      auto row = centroids.row(c);
      for (std::size_t j = 0; j < d; ++j) {
        row[j] = sums.at(c, j) / static_cast<double>(sizes[c]);
      }
    }
  }
  reassign();  // assignments consistent with the final centroids

  std::fill(sizes.begin(), sizes.end(), 0);
  for (std::size_t i = 0; i < n; ++i) ++sizes[assign[i]];
  return {std::move(centroids), std::move(assign), std::move(sizes)};
}

}  // namespace

std::size_t birge_rozenholc_bins(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("histogram bin selection: need n >= 2");
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  if (*hi <= *lo) return 1;

  const auto d_max = std::max<std::size_t>(
      static_cast<std::size_t>(static_cast<double>(n) / std::log(static_cast<double>(n))), 2);
  std::size_t best_d = 1;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t bins = 1; bins <= d_max; ++bins) {
    const Histogram h = fit_histogram(x, bins);
    const double penalty =
        static_cast<double>(bins) - 1.0 + std::pow(std::log(static_cast<double>(bins)), 2.5);
    const double objective = histogram_log_likelihood(h, n) - penalty;
    if (objective > best) {
      best = objective;
      best_d = bins;
    }
  }
  return best_d;
}

ScoreVector hbos_score(const Matrix& x) {
  const std::size_t n = x.rows(), d = x.cols();
  std::vector<Histogram> hists(d);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t j = 0; j < d; ++j) {
    const auto col = x.column(j);
    hists[j] = fit_histogram(col, birge_rozenholc_bins(col));
    // scale so the tallest bin has density 1 (bin width cancels)
    const double top = *std::max_element(hists[j].counts.begin(), hists[j].counts.end());
    for (double& c : hists[j].counts) c /= top;
  }
  std::vector<double> s(n, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      s[i] += std::log(1.0 / (hists[j].counts[hists[j].bin(x.at(i, j))] + kHistEps));
    }
  }
  return ScoreVector(std::move(s));
}

ScoreVector loda_score(const Matrix& x, std::uint64_t seed) {
  constexpr std::size_t kProjections = 100;
  const std::size_t n = x.rows(), d = x.cols();
  const auto non_zero = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(d))));

  std::vector<double> s(n, 0.0);
  std::vector<std::vector<double>> partial(kProjections);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t p = 0; p < kProjections; ++p) {
    Rng rng(mix_seed(seed, p));
    const auto dims = sample_without_replacement(d, non_zero, rng);
    std::vector<double> w(non_zero);
    for (double& c : w) c = rng.next_normal();

    std::vector<double> z(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = x.row(i);
      double acc = 0.0;
      for (std::size_t t = 0; t < non_zero; ++t) acc += w[t] * row[dims[t]];
      z[i] = acc;
    }

    std::vector<double>& out = partial[p];
    out.assign(n, 0.0);
    const auto [lo, hi] = std::minmax_element(z.begin(), z.end());
    if (*hi <= *lo) continue;  // degenerate projection carries no signal
    const Histogram h = fit_histogram(z, birge_rozenholc_bins(z));
    for (std::size_t i = 0; i < n; ++i) {
      const double density =
          h.counts[h.bin(z[i])] / (static_cast<double>(n) * h.width);
      out[i] = -std::log(density + kHistEps);
    }
  }
  for (std::size_t p = 0; p < kProjections; ++p) {
    for (std::size_t i = 0; i < n; ++i) s[i] += partial[p][i];
  }
  for (double& v : s) v /= static_cast<double>(kProjections);
  return ScoreVector(std::move(s));
}

ScoreVector pca_score(const Matrix& x, double variance_threshold) {
  const std::size_t n = x.rows(), d = x.cols();
  if (n < 2) throw std::invalid_argument("PCA: need n >= 2");

  Eigen::MatrixXd xc(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) xc(i, j) = x.at(i, j);
  }
  const Eigen::RowVectorXd mean = xc.colwise().mean();
  xc.rowwise() -= mean;
  const Eigen::MatrixXd cov = (xc.transpose() * xc) / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw std::runtime_error("PCA: eigendecomposition failed");

  // eigenvalues ascending; walk from the largest down
  const auto& lambda = eig.eigenvalues();
  double total = 0.0;
  for (Eigen::Index j = 0; j < lambda.size(); ++j) total += std::max(lambda[j], 0.0);
  if (total <= 0.0) throw std::runtime_error("PCA: zero total variance");

  std::vector<Eigen::Index> retained;
  double cum = 0.0;
  for (Eigen::Index t = lambda.size() - 1; t >= 0; --t) {
    if (lambda[t] <= 1e-12) break;
    retained.push_back(t);
    cum += lambda[t];
    if (cum / total > variance_threshold) break;
  }
  if (retained.empty()) throw std::runtime_error("PCA: no usable components");

  std::vector<double> s(n, 0.0);
  for (Eigen::Index t : retained) {
    const Eigen::VectorXd proj = xc * eig.eigenvectors().col(t);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] += proj[static_cast<Eigen::Index>(i)] * proj[static_cast<Eigen::Index>(i)] / lambda[t];
    }
  }
  return ScoreVector(std::move(s));
}

ScoreVector kde_score(const Matrix& x) {
  const std::size_t n = x.rows(), d = x.cols();
  if (n < 2) throw std::invalid_argument("KDE: need n >= 2");

  // per-dimension Scott bandwidth
  std::vector<double> inv_h(d), log_h(d);
  const double factor = std::pow(static_cast<double>(n), -1.0 / (static_cast<double>(d) + 4.0));
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x.at(i, j);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dv = x.at(i, j) - mean;
      ss += dv * dv;
    }
    const double sigma = std::sqrt(ss / static_cast<double>(n - 1));
    const double h = std::max(sigma * factor, 1e-300);
    inv_h[j] = 1.0 / h;
    log_h[j] = std::log(h);
  }
  double log_norm = -static_cast<double>(d) * 0.5 * std::log(2.0 * std::numbers::pi) -
                    std::log(static_cast<double>(n - 1));
  for (std::size_t j = 0; j < d; ++j) log_norm -= log_h[j];

  std::vector<double> s(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t i = 0; i < n; ++i) {
    const auto pi = x.row(i);
    std::vector<double> expo;
    expo.reserve(n - 1);
    for (std::size_t q = 0; q < n; ++q) {
      if (q == i) continue;
      const auto pq = x.row(q);
      double e = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double u = (pi[j] - pq[j]) * inv_h[j];
        e -= 0.5 * u * u;
      }
      expo.push_back(e);
    }
    s[i] = -(logsumexp(expo) + log_norm);
  }
  return ScoreVector(std::move(s));
}

GmmTrace gmm_score_traced(const Matrix& x, std::size_t n_components, std::uint64_t seed) {
  const std::size_t n = x.rows(), d = x.cols();
  const std::size_t k = std::min(n_components, n);
  constexpr double kRidge = 1e-6;
  constexpr std::size_t kMaxIter = 200;
  constexpr double kTol = 1e-6;

  Eigen::MatrixXd data(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) data(i, j) = x.at(i, j);
  }

  Rng rng(mix_seed(seed, 0x474D4DULL));
  const auto seeds = kmeanspp_seeds(x, k, rng);

  std::vector<Eigen::VectorXd> mu(k);
  std::vector<Eigen::MatrixXd> sigma(k);
  Eigen::VectorXd weight(k);

  // initial hard assignment to the seeded means
  std::vector<std::size_t> assign(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    double best_d2 = squared_distance(x.row(i), x.row(seeds[0]));
    for (std::size_t c = 1; c < k; ++c) {
      const double d2 = squared_distance(x.row(i), x.row(seeds[c]));
      if (d2 < best_d2) {
        best_d2 = d2;
        best = c;
      }
    }
    assign[i] = best;
  }
  const Eigen::RowVectorXd grand_mean = data.colwise().mean();
  Eigen::MatrixXd global_cov = Eigen::MatrixXd::Zero(d, d);
  {
    Eigen::MatrixXd centered = data.rowwise() - grand_mean;
    global_cov = centered.transpose() * centered / static_cast<double>(n);
  }
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (assign[i] == c) members.push_back(i);
    }
    weight[static_cast<Eigen::Index>(c)] =
        std::max(members.size(), std::size_t{1}) / static_cast<double>(n);
    if (members.empty()) {
      mu[c] = data.row(static_cast<Eigen::Index>(seeds[c])).transpose();
      sigma[c] = global_cov;
    } else {
      Eigen::VectorXd m = Eigen::VectorXd::Zero(d);
      for (std::size_t i : members) m += data.row(static_cast<Eigen::Index>(i)).transpose();
      m /= static_cast<double>(members.size());
      mu[c] = m;
      if (members.size() < 2) {
        sigma[c] = global_cov;
      } else {
        Eigen::MatrixXd cv = Eigen::MatrixXd::Zero(d, d);
        for (std::size_t i : members) {
          const Eigen::VectorXd dv = data.row(static_cast<Eigen::Index>(i)).transpose() - m;
          cv += dv * dv.transpose();
        }
        sigma[c] = cv / static_cast<double>(members.size());
      }
    }
    sigma[c].diagonal().array() += kRidge;
  }
  weight /= weight.sum();

  Eigen::MatrixXd log_prob(n, k);  // log(weight_c * N(x_i | mu_c, sigma_c))
  std::vector<double> trace;
  std::vector<double> per_sample_ll(n);

  const double log2pi = std::log(2.0 * std::numbers::pi);
  for (std::size_t iter = 0; iter <= kMaxIter; ++iter) {
    // E step
    for (std::size_t c = 0; c < k; ++c) {
      const Eigen::LLT<Eigen::MatrixXd> llt(sigma[c]);
      if (llt.info() != Eigen::Success) {
        throw std::runtime_error("GMM: covariance of component " + std::to_string(c) +
                                 " is not positive definite");
      }
      double log_det = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        log_det += std::log(llt.matrixLLT()(static_cast<Eigen::Index>(j),
                                            static_cast<Eigen::Index>(j)));
      }
      log_det *= 2.0;
      const double log_w = std::log(weight[static_cast<Eigen::Index>(c)]);
      const Eigen::MatrixXd centered = data.rowwise() - mu[c].transpose();
      const Eigen::MatrixXd solved = llt.matrixL().solve(centered.transpose());
      for (std::size_t i = 0; i < n; ++i) {
        const double quad = solved.col(static_cast<Eigen::Index>(i)).squaredNorm();
        log_prob(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
            log_w - 0.5 * (static_cast<double>(d) * log2pi + log_det + quad);
      }
    }
    double total_ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Index ei = static_cast<Eigen::Index>(i);
      const double hi = log_prob.row(ei).maxCoeff();
      double sum = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        sum += std::exp(log_prob(ei, static_cast<Eigen::Index>(c)) - hi);
      }
      per_sample_ll[i] = hi + std::log(sum);
      total_ll += per_sample_ll[i];
    }
    if (!std::isfinite(total_ll)) {
      throw std::runtime_error("GMM: non-finite likelihood during EM");
    }
    const double mean_ll = total_ll / static_cast<double>(n);
    trace.push_back(mean_ll);
    if (iter == kMaxIter) break;
    if (trace.size() >= 2 && mean_ll - trace[trace.size() - 2] < kTol) break;

    // M step: responsibilities in place of log_prob
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Index ei = static_cast<Eigen::Index>(i);
      for (std::size_t c = 0; c < k; ++c) {
        const Eigen::Index ec = static_cast<Eigen::Index>(c);
        log_prob(ei, ec) = std::exp(log_prob(ei, ec) - per_sample_ll[i]);
      }
    }
    for (std::size_t c = 0; c < k; ++c) {
      const Eigen::Index ec = static_cast<Eigen::Index>(c);
      const double resp_sum = log_prob.col(ec).sum();
      const double safe_sum = std::max(resp_sum, 1e-12);
      Eigen::VectorXd m = (log_prob.col(ec).transpose() * data).transpose() / safe_sum;
      Eigen::MatrixXd cv = Eigen::MatrixXd::Zero(d, d);
      for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Index ei = static_cast<Eigen::Index>(i);
        const Eigen::VectorXd dv = data.row(ei).transpose() - m;
        cv.noalias() += log_prob(ei, ec) * (dv * dv.transpose());
      }
      cv /= safe_sum;
      cv.diagonal().array() += kRidge;
      weight[ec] = resp_sum / static_cast<double>(n);
      mu[c] = std::move(m);
      sigma[c] = std::move(cv);
    }
    weight = weight.cwiseMax(1e-300);
    weight /= weight.sum();
  }

  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = -per_sample_ll[i];
  return {ScoreVector(std::move(s)), std::move(trace)};
}

ScoreVector gmm_score(const Matrix& x, std::size_t n_components, std::uint64_t seed) {
  return gmm_score_traced(x, n_components, seed).scores;
}

ScoreVector copod_score(const Matrix& x) {
  const TailScores t = ecdf_tails(x);
  const std::size_t n = x.rows(), d = x.cols();
  std::vector<double> s(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      s[i] += std::max(t.u_skew.at(i, j),
                       0.5 * (t.u_left.at(i, j) + t.u_right.at(i, j)));
    }
  }
  return ScoreVector(std::move(s));
}

ScoreVector ecod_score(const Matrix& x) {
  const TailScores t = ecdf_tails(x);
  const std::size_t n = x.rows(), d = x.cols();
  std::vector<double> s(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      s[i] += std::max({t.u_left.at(i, j), t.u_right.at(i, j), t.u_skew.at(i, j)});
    }
  }
  return ScoreVector(std::move(s));
}

ClusterSplit split_clusters(std::vector<std::size_t> sizes, double alpha, double beta,
                            std::size_t n) {
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  ClusterSplit split;
  split.sizes_desc = std::move(sizes);
  std::size_t cum = 0;
  for (std::size_t b = 1; b <= split.sizes_desc.size(); ++b) {
    cum += split.sizes_desc[b - 1];
    const bool alpha_rule = static_cast<double>(cum) >= alpha * static_cast<double>(n);
    const bool beta_rule =
        b < split.sizes_desc.size() && split.sizes_desc[b] > 0 &&
        static_cast<double>(split.sizes_desc[b - 1]) /
                static_cast<double>(split.sizes_desc[b]) >=
            beta;
    if (alpha_rule || beta_rule) {
      split.boundary = b;
      return split;
    }
  }
  split.boundary = split.sizes_desc.size();
  return split;
}

ScoreVector cblof_score(const Matrix& x, std::size_t k, double alpha, double beta,
                        bool weighted, std::uint64_t seed) {
  const std::size_t n = x.rows();
  const std::size_t k_eff = std::min(k, n);
  if (k_eff < 1) throw std::invalid_argument("CBLOF: need at least one cluster");

  Rng rng(mix_seed(seed, 0x43424C4FULL));
  const KMeansResult km = kmeans(x, k_eff, rng, 100);

  const ClusterSplit split = split_clusters(km.sizes, alpha, beta, n);
  // the boundary counts clusters in (size desc, id asc) order
  std::vector<std::size_t> order(k_eff);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return km.sizes[a] > km.sizes[b];
  });
  std::vector<bool> is_large(k_eff, false);
  for (std::size_t t = 0; t < split.boundary; ++t) is_large[order[t]] = true;

  std::vector<double> s(n);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t own = km.assign[i];
    double dist;
    if (is_large[own]) {
      dist = euclidean_distance(x.row(i), km.centroids.row(own));
    } else {
      dist = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k_eff; ++c) {
        if (!is_large[c]) continue;
        dist = std::min(dist, euclidean_distance(x.row(i), km.centroids.row(c)));
      }
    }
    s[i] = weighted ? dist * static_cast<double>(km.sizes[own]) : dist;
  }
  return ScoreVector(std::move(s));
}

}  // namespace odbench
