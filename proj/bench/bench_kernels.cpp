// Timings for the OpenMP kernels against the serial reference, plus one
// end-to-end grid fit at 1 thread and at the full budget.  Every comparison
// also checks the outputs are bitwise identical, since the parallel loops
// are supposed to split work over disjoint output slots only.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#include <Eigen/Core>

#include "treeagg/admm.hpp"
#include "treeagg/experiments.hpp"
#include "treeagg/kernels.hpp"
#include "treeagg/model_selection.hpp"
#include "treeagg/rng.hpp"
#include "treeagg/runtime.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    f();
    best = std::min(best, seconds_since(t0));
  }
  return best;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

void report(const char* name, std::int64_t size, double t_serial,
            double t_parallel, bool same) {
  std::printf("%-28s n=%-10lld serial %8.4f s   omp %8.4f s   x%.2f   %s\n",
              name, static_cast<long long>(size), t_serial, t_parallel,
              t_serial / t_parallel, same ? "identical" : "MISMATCH");
}

void bench_soft_threshold(std::int64_t n, int reps) {
  treeagg::Rng rng(42);
  std::vector<double> x(n), thr(n), out_s(n), out_p(n);
  for (auto& v : x) v = rng.normal();
  for (auto& v : thr) v = 0.5 * rng.uniform();

  const double t1 = time_best_of(reps, [&] {
    treeagg::kernels::serial::soft_threshold(n, x.data(), 0.3, out_s.data());
  });
  const double t2 = time_best_of(reps, [&] {
    treeagg::kernels::soft_threshold(n, x.data(), 0.3, out_p.data());
  });
  report("soft_threshold", n, t1, t2, bitwise_equal(out_s, out_p));

  const double t3 = time_best_of(reps, [&] {
    treeagg::kernels::serial::soft_threshold_each(n, x.data(), thr.data(),
                                                  out_s.data());
  });
  const double t4 = time_best_of(reps, [&] {
    treeagg::kernels::soft_threshold_each(n, x.data(), thr.data(),
                                          out_p.data());
  });
  report("soft_threshold_each", n, t3, t4, bitwise_equal(out_s, out_p));
}

void bench_compressed_rows(std::int64_t rows, std::int64_t nnz_per_row,
                           int reps) {
  treeagg::Rng rng(7);
  const std::int64_t cols = rows / 4 + 1;
  std::vector<std::int64_t> ptr(rows + 1), idx;
  std::vector<double> val, x(cols), out_s(rows), out_p(rows);
  idx.reserve(rows * nnz_per_row);
  val.reserve(rows * nnz_per_row);
  ptr[0] = 0;
  for (std::int64_t i = 0; i < rows; ++i) {
    for (std::int64_t k = 0; k < nnz_per_row; ++k) {
      idx.push_back(static_cast<std::int64_t>(
          rng.uniform_int(static_cast<std::uint64_t>(cols))));
      val.push_back(rng.normal());
    }
    ptr[i + 1] = ptr[i] + nnz_per_row;
  }
  for (auto& v : x) v = rng.normal();

  const double t1 = time_best_of(reps, [&] {
    treeagg::kernels::serial::compressed_rows_apply(
        rows, ptr.data(), idx.data(), val.data(), x.data(), out_s.data());
  });
  const double t2 = time_best_of(reps, [&] {
    treeagg::kernels::compressed_rows_apply(rows, ptr.data(), idx.data(),
                                            val.data(), x.data(),
                                            out_p.data());
  });
  report("compressed_rows_apply", rows * nnz_per_row, t1, t2,
         bitwise_equal(out_s, out_p));
}

void bench_grid_fit(int max_threads) {
  treeagg::ScenarioSpec spec;
  spec.n = 100;
  spec.p = 200;
  spec.k = 10;
  spec.zero_frac = 0.2;
  spec.seed = 11;
  const treeagg::ScenarioData data = treeagg::gen_scenario(spec);

  treeagg::FitConfig base;
  const std::vector<treeagg::GridPoint> grid =
      treeagg::make_grid(data.X, data.y, 4, 20, 1e-3);

  treeagg::runtime::set_threads(1);
  std::vector<treeagg::FitResult> fits_1;
  const double t1 = time_best_of(1, [&] {
    fits_1 = treeagg::fit_path(data.X, data.y, data.tree, grid, base);
  });

  treeagg::runtime::set_threads(max_threads);
  std::vector<treeagg::FitResult> fits_n;
  const double tn = time_best_of(1, [&] {
    fits_n = treeagg::fit_path(data.X, data.y, data.tree, grid, base);
  });

  bool same = fits_1.size() == fits_n.size();
  for (std::size_t i = 0; same && i < fits_1.size(); ++i) {
    same = fits_1[i].beta == fits_n[i].beta &&
           fits_1[i].gamma == fits_n[i].gamma;
  }
  std::printf(
      "%-28s n=%-10zu 1 thr  %8.4f s   %d thr %7.4f s   x%.2f   %s\n",
      "fit_path 4x20 grid", grid.size(), t1, max_threads, tn, t1 / tn,
      same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  int threads = omp_get_max_threads();
  if (argc > 1) threads = std::max(1, std::atoi(argv[1]));
  std::printf("thread budget: %d\n\n", threads);

  treeagg::runtime::set_threads(1);
  bench_soft_threshold(1 << 22, 5);
  bench_compressed_rows(1 << 18, 16, 5);
  std::printf("\n(serial column ran the reference namespace; omp column the "
              "dispatching kernels at 1 thread)\n\n");

  treeagg::runtime::set_threads(threads);
  bench_soft_threshold(1 << 22, 5);
  bench_compressed_rows(1 << 18, 16, 5);
  std::printf("\n");

  bench_grid_fit(threads);
  return 0;
}
