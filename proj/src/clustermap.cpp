#include "odbench/clustermap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace odbench {

Matrix pearson_distance_matrix(const Matrix& rows) {
  const std::size_t n = rows.rows(), d = rows.cols();
  if (n < 2) throw std::invalid_argument("pearson distance: need at least 2 rows");

  std::vector<double> mean(n, 0.0), norm(n, 0.0);
  Matrix centered(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = rows.row(i);
    for (double v : r) mean[i] += v;
    mean[i] /= static_cast<double>(d);
    auto c = centered.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      c[j] = r[j] - mean[i];
      norm[i] += c[j] * c[j];
    }
    if (norm[i] <= 0.0) {
      throw std::invalid_argument("pearson distance: row " + std::to_string(i) +
                                  " has zero variance");
    }
    norm[i] = std::sqrt(norm[i]);
  }

  Matrix dist(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double dot = 0.0;
      const auto a = centered.row(i), b = centered.row(j);
      for (std::size_t t = 0; t < d; ++t) dot += a[t] * b[t];
      const double dval = 1.0 - dot / (norm[i] * norm[j]);
      dist.at(i, j) = dval;
      dist.at(j, i) = dval;
    }
  }
  return dist;
}

std::vector<std::size_t> Dendrogram::leaves_under(std::size_t node) const {
  std::vector<std::size_t> out, stack{node};
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    stack.pop_back();
    if (id < n_leaves) {
      out.push_back(id);
    } else {
      const Merge& m = merges[id - n_leaves];
      stack.push_back(m.a);
      stack.push_back(m.b);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Dendrogram average_linkage(const Matrix& dist) {
  const std::size_t n = dist.rows();
  if (n < 2) throw std::invalid_argument("average linkage: need at least 2 leaves");

  struct Cluster {
    std::size_t node_id;
    std::size_t rep;  // smallest leaf index, for tie-breaking
    std::size_t size;
  };
  std::vector<Cluster> active;
  for (std::size_t i = 0; i < n; ++i) active.push_back({i, i, 1});

  // working copy of inter-cluster distances, indexed by active slot
  Matrix d = dist;
  std::vector<std::size_t> slot(n);
  for (std::size_t i = 0; i < n; ++i) slot[i] = i;

  Dendrogram dend;
  dend.n_leaves = n;
  std::vector<std::size_t> live(n);
  for (std::size_t i = 0; i < n; ++i) live[i] = i;

  for (std::size_t step = 0; step + 1 < n; ++step) {
    // closest pair; ties resolved on (rep_a, rep_b) lexicographic order
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < live.size(); ++a) {
      for (std::size_t b = a + 1; b < live.size(); ++b) {
        std::size_t ia = live[a], ib = live[b];
        if (active[ia].rep > active[ib].rep) std::swap(ia, ib);
        const double dd = d.at(ia, ib);
        const bool better =
            dd < best ||
            (dd == best && (active[ia].rep < active[bi].rep ||
                            (active[ia].rep == active[bi].rep &&
                             active[ib].rep < active[bj].rep)));
        if (best == std::numeric_limits<double>::infinity() || better) {
          best = dd;
          bi = ia;
          bj = ib;
        }
      }
    }

    const std::size_t new_id = n + step;
    dend.merges.push_back({active[bi].node_id, active[bj].node_id, best,
                           active[bi].size + active[bj].size});

    // average-linkage update into slot bi
    const double wa = static_cast<double>(active[bi].size);
    const double wb = static_cast<double>(active[bj].size);
    for (std::size_t t : live) {
      if (t == bi || t == bj) continue;
      const double merged = (wa * d.at(bi, t) + wb * d.at(bj, t)) / (wa + wb);
      d.at(bi, t) = merged;
      d.at(t, bi) = merged;
    }
    active[bi].node_id = new_id;
    active[bi].rep = std::min(active[bi].rep, active[bj].rep);
    active[bi].size += active[bj].size;
    live.erase(std::remove(live.begin(), live.end(), bj), live.end());
  }
  return dend;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> two_cluster_cut(
    const Dendrogram& dend) {
  const Dendrogram::Merge& last = dend.merges.back();
  return {dend.leaves_under(last.a), dend.leaves_under(last.b)};
}

namespace {

// per-node state for the leaf-ordering dynamic program; cost[u][w] is the
// best ordering of this subtree starting at left-child leaf u and ending
// at right-child leaf w (pairs inside one child are not valid boundaries)
struct OloNode {
  std::vector<std::size_t> left_leaves, right_leaves;
  std::vector<std::uint8_t> side;    // per leaf id: 0 left, 1 right, 2 absent
  std::vector<std::size_t> pos;      // index within its side's leaf list
  std::vector<std::vector<double>> cost;
  std::vector<std::vector<std::size_t>> arg_m, arg_l;
};

}  // namespace

std::vector<std::size_t> optimal_leaf_order(const Dendrogram& dend, const Matrix& dist) {
  const std::size_t n = dend.n_leaves;
  if (n == 1) return {0};
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<OloNode> nodes(dend.merges.size());

  // best cost of ordering subtree `id` with boundary leaves (u, w);
  // +inf when (u, w) is not a boundary pair of that subtree
  const auto cost_of = [&](std::size_t id, std::size_t u, std::size_t w) -> double {
    if (id < n) return u == w ? 0.0 : kInf;
    const OloNode& nd = nodes[id - n];
    if (nd.side[u] == 0 && nd.side[w] == 1) return nd.cost[nd.pos[u]][nd.pos[w]];
    if (nd.side[w] == 0 && nd.side[u] == 1) return nd.cost[nd.pos[w]][nd.pos[u]];
    return kInf;
  };

  for (std::size_t t = 0; t < dend.merges.size(); ++t) {
    OloNode& nd = nodes[t];
    nd.left_leaves = dend.leaves_under(dend.merges[t].a);
    nd.right_leaves = dend.leaves_under(dend.merges[t].b);
    nd.side.assign(n, 2);
    nd.pos.assign(n, 0);
    for (std::size_t i = 0; i < nd.left_leaves.size(); ++i) {
      nd.side[nd.left_leaves[i]] = 0;
      nd.pos[nd.left_leaves[i]] = i;
    }
    for (std::size_t i = 0; i < nd.right_leaves.size(); ++i) {
      nd.side[nd.right_leaves[i]] = 1;
      nd.pos[nd.right_leaves[i]] = i;
    }

    const auto& lx = nd.left_leaves;
    const auto& ly = nd.right_leaves;
    nd.cost.assign(lx.size(), std::vector<double>(ly.size(), kInf));
    nd.arg_m.assign(lx.size(), std::vector<std::size_t>(ly.size(), 0));
    nd.arg_l.assign(lx.size(), std::vector<std::size_t>(ly.size(), 0));
    for (std::size_t iu = 0; iu < lx.size(); ++iu) {
      for (std::size_t iw = 0; iw < ly.size(); ++iw) {
        double best = kInf;
        std::size_t best_m = lx[0], best_l = ly[0];
        for (std::size_t im = 0; im < lx.size(); ++im) {
          const double left_cost = cost_of(dend.merges[t].a, lx[iu], lx[im]);
          if (left_cost >= best) continue;
          for (std::size_t il = 0; il < ly.size(); ++il) {
            const double right_cost = cost_of(dend.merges[t].b, ly[il], ly[iw]);
            if (right_cost == kInf) continue;
            const double c = left_cost + dist.at(lx[im], ly[il]) + right_cost;
            if (c < best) {
              best = c;
              best_m = lx[im];
              best_l = ly[il];
            }
          }
        }
        nd.cost[iu][iw] = best;
        nd.arg_m[iu][iw] = best_m;
        nd.arg_l[iu][iw] = best_l;
      }
    }
  }

  // best root boundary pair, lexicographic on ties
  const OloNode& rn = nodes.back();
  double best = kInf;
  std::size_t bu = rn.left_leaves[0], bw = rn.right_leaves[0];
  for (std::size_t iu = 0; iu < rn.left_leaves.size(); ++iu) {
    for (std::size_t iw = 0; iw < rn.right_leaves.size(); ++iw) {
      if (rn.cost[iu][iw] < best) {
        best = rn.cost[iu][iw];
        bu = rn.left_leaves[iu];
        bw = rn.right_leaves[iw];
      }
    }
  }
  if (bu > bw) std::swap(bu, bw);  // canonical direction

  // reconstruct the ordering that runs from u to w through each subtree
  std::vector<std::size_t> order;
  order.reserve(n);
  const std::function<void(std::size_t, std::size_t, std::size_t)> emit =
      [&](std::size_t id, std::size_t u, std::size_t w) {
        if (id < n) {
          order.push_back(id);
          return;
        }
        const OloNode& nd = nodes[id - n];
        const std::size_t child_a = dend.merges[id - n].a;
        const std::size_t child_b = dend.merges[id - n].b;
        const bool u_left = nd.side[u] == 0;
        const std::size_t uu = u_left ? u : w;  // stored orientation starts left
        const std::size_t ww = u_left ? w : u;
        const std::size_t m = nd.arg_m[nd.pos[uu]][nd.pos[ww]];
        const std::size_t l = nd.arg_l[nd.pos[uu]][nd.pos[ww]];
        if (u_left) {
          emit(child_a, u, m);
          emit(child_b, l, w);
        } else {
          // reversed traversal of the stored path w..m | l..u
          emit(child_b, u, l);
          emit(child_a, m, w);
        }
      };
  emit(n + dend.merges.size() - 1, bu, bw);
  return order;
}

void write_dendrogram_json(const Dendrogram& dend,
                           const std::vector<std::string>& leaf_names,
                           const std::string& path) {
  nlohmann::ordered_json j;
  j["leaves"] = leaf_names;
  auto merges = nlohmann::ordered_json::array();
  for (const auto& m : dend.merges) {
    merges.push_back({{"a", m.a}, {"b", m.b}, {"height", m.height}, {"size", m.size}});
  }
  j["merges"] = std::move(merges);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

namespace {

std::string heat_color(double v) {  // v in [0,1] -> blue..white..red
  const double t = std::clamp(v, 0.0, 1.0);
  int r, g, b;
  if (t < 0.5) {
    const double u = t / 0.5;
    r = static_cast<int>(40 + u * (255 - 40));
    g = static_cast<int>(80 + u * (255 - 80));
    b = 255;
  } else {
    const double u = (t - 0.5) / 0.5;
    r = 255;
    g = static_cast<int>(255 - u * (255 - 70));
    b = static_cast<int>(255 - u * (255 - 40));
  }
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

// x positions of every node given the leaf order, plus segment drawing
void draw_dendrogram(std::ostream& svg, const Dendrogram& dend,
                     const std::vector<std::size_t>& order, double cell,
                     double x0, double y0, double depth, bool horizontal) {
  const std::size_t n = dend.n_leaves;
  std::vector<double> pos(n + dend.merges.size());
  std::vector<double> height(n + dend.merges.size(), 0.0);
  std::vector<std::size_t> where(n);
  for (std::size_t i = 0; i < n; ++i) where[order[i]] = i;
  for (std::size_t i = 0; i < n; ++i) {
    pos[i] = (static_cast<double>(where[i]) + 0.5) * cell;
  }
  const double max_h = dend.merges.back().height > 0 ? dend.merges.back().height : 1.0;
  for (std::size_t t = 0; t < dend.merges.size(); ++t) {
    const auto& m = dend.merges[t];
    pos[n + t] = 0.5 * (pos[m.a] + pos[m.b]);
    height[n + t] = m.height;
    const double ha = depth * (1.0 - height[m.a] / max_h);
    const double hb = depth * (1.0 - height[m.b] / max_h);
    const double hm = depth * (1.0 - m.height / max_h);
    if (horizontal) {
      svg << "<polyline fill=\"none\" stroke=\"#444\" points=\""
          << x0 + pos[m.a] << ',' << y0 + ha << ' ' << x0 + pos[m.a] << ',' << y0 + hm
          << ' ' << x0 + pos[m.b] << ',' << y0 + hm << ' ' << x0 + pos[m.b] << ','
          << y0 + hb << "\"/>\n";
    } else {
      svg << "<polyline fill=\"none\" stroke=\"#444\" points=\""
          << x0 + ha << ',' << y0 + pos[m.a] << ' ' << x0 + hm << ',' << y0 + pos[m.a]
          << ' ' << x0 + hm << ',' << y0 + pos[m.b] << ' ' << x0 + hb << ','
          << y0 + pos[m.b] << "\"/>\n";
    }
  }
}

}  // namespace

void write_clustermap_svg(const AucMatrix& m, const std::string& path) {
  const Matrix dist_rows = pearson_distance_matrix(m.values);
  Matrix transposed(m.datasets.size(), m.algorithms.size());
  for (std::size_t i = 0; i < m.algorithms.size(); ++i) {
    for (std::size_t j = 0; j < m.datasets.size(); ++j) {
      transposed.at(j, i) = m.values.at(i, j);
    }
  }
  const Matrix dist_cols = pearson_distance_matrix(transposed);

  const Dendrogram dr = average_linkage(dist_rows);
  const Dendrogram dc = average_linkage(dist_cols);
  const auto row_order = optimal_leaf_order(dr, dist_rows);
  const auto col_order = optimal_leaf_order(dc, dist_cols);

  const double cell = 14.0, dend_depth = 60.0, label = 110.0, pad = 4.0;
  const double width = dend_depth + pad + cell * m.datasets.size() + label;
  const double height = dend_depth + pad + cell * m.algorithms.size() + label;

  std::ofstream svg(path);
  if (!svg) throw std::runtime_error("cannot write " + path);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"9\">\n";

  const double hx = dend_depth + pad, hy = dend_depth + pad;
  for (std::size_t r = 0; r < m.algorithms.size(); ++r) {
    for (std::size_t c = 0; c < m.datasets.size(); ++c) {
      const double v = m.values.at(row_order[r], col_order[c]);
      svg << "<rect x=\"" << hx + cell * c << "\" y=\"" << hy + cell * r
          << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\""
          << heat_color(v) << "\"/>\n";
    }
  }
  for (std::size_t r = 0; r < m.algorithms.size(); ++r) {
    svg << "<text x=\"" << hx + cell * m.datasets.size() + 3 << "\" y=\""
        << hy + cell * r + cell * 0.75 << "\">" << m.algorithms[row_order[r]]
        << "</text>\n";
  }
  for (std::size_t c = 0; c < m.datasets.size(); ++c) {
    const double tx = hx + cell * c + cell * 0.75;
    const double ty = hy + cell * m.algorithms.size() + 3;
    svg << "<text transform=\"translate(" << tx << ',' << ty
        << ") rotate(45)\">" << m.datasets[col_order[c]] << "</text>\n";
  }
  draw_dendrogram(svg, dc, col_order, cell, hx, 0.0, dend_depth, true);
  draw_dendrogram(svg, dr, row_order, cell, 0.0, hy, dend_depth, false);
  svg << "</svg>\n";
}

}  // namespace odbench
