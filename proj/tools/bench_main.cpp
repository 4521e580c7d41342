// Timing comparison between the OpenMP kernels and the serial reference
// implementations on a synthetic workload.
#include <chrono>
#include <cstdio>
#include <string>

#include "odbench/detectors/isolation.hpp"
#include "odbench/detectors/proximity.hpp"
#include "odbench/detectors/statistical.hpp"
#include "odbench/neighbors.hpp"
#include "odbench/synthgen.hpp"
#include "reference/reference.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void report(const char* name, double parallel_ms, double serial_ms) {
  std::printf("%-28s %10.1f ms   serial %10.1f ms   speedup %.2fx\n", name,
              parallel_ms, serial_ms, serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = 4000;
  if (argc > 1) n = static_cast<std::size_t>(std::stoul(argv[1]));

  odbench::ArchetypeSpec spec;
  spec.archetype = odbench::Archetype::kGlobal;
  spec.n = n;
  spec.d = 8;
  spec.contamination = 0.05;
  spec.seed = 7;
  const auto ds = odbench::generate_archetype(spec);
  const auto& x = ds.features;
  std::printf("workload: %zu samples x %zu dims\n\n", x.rows(), x.cols());

  {
    auto t0 = Clock::now();
    const auto table = odbench::build_neighbor_table(x, 30);
    const double table_ms = ms_since(t0);
    t0 = Clock::now();
    const auto brute = odbench::ref::brute_force_neighbors(x, 30);
    report("neighbor table (k=30)", table_ms, ms_since(t0));

    // pipeline timings include the table construction each kernel needs
    t0 = Clock::now();
    const auto lof = odbench::lof_score(x, table, 20);
    const double lof_par = table_ms + ms_since(t0);
    t0 = Clock::now();
    const auto lof_ref = odbench::ref::lof_direct(x, 20);
    report("LOF incl. table (k=20)", lof_par, ms_since(t0));

    t0 = Clock::now();
    const auto knn = odbench::knn_score(table, 20);
    const double knn_par = table_ms + ms_since(t0);
    t0 = Clock::now();
    const auto knn_ref = odbench::ref::knn_mean_direct(x, 20);
    report("kNN incl. table (k=20)", knn_par, ms_since(t0));

    // keep the optimizer honest
    volatile double sink = lof[0] + knn[0] + lof_ref[0] + knn_ref[0] +
                           brute[0][0].distance + table.row(0)[0].distance;
    (void)sink;
  }

  {
    odbench::IsolationParams params;
    params.n_trees = 500;
    params.subsample = 256;
    params.seed = 11;
    const auto t0 = Clock::now();
    const auto s = odbench::if_score(x, params);
    std::printf("%-28s %10.1f ms   (no serial counterpart; tree build + eval)\n",
                "isolation forest (500 trees)", ms_since(t0));
    volatile double sink = s[0];
    (void)sink;
  }

  {
    const auto t0 = Clock::now();
    const auto s = odbench::kde_score(x);
    const double par = ms_since(t0);
    const auto t1 = Clock::now();
    const auto r = odbench::ref::kde_direct(x);
    report("KDE (leave-one-out)", par, ms_since(t1));
    volatile double sink = s[0] + r[0];
    (void)sink;
  }
  return 0;
}
