#include "treeagg/kernels.hpp"

#include <cmath>

#include "treeagg/runtime.hpp"

namespace treeagg::kernels {

namespace serial {

void soft_threshold(std::int64_t n, const double* x, double thr, double* out) {
  for (std::int64_t i = 0; i < n; ++i) {
    const double v = x[i];
    const double m = std::fabs(v) - thr;
    out[i] = m > 0.0 ? (v > 0.0 ? m : -m) : 0.0;
  }
}

void soft_threshold_each(std::int64_t n, const double* x, const double* thr,
                         double* out) {
  for (std::int64_t i = 0; i < n; ++i) {
    const double v = x[i];
    const double m = std::fabs(v) - thr[i];
    out[i] = m > 0.0 ? (v > 0.0 ? m : -m) : 0.0;
  }
}

void compressed_rows_apply(std::int64_t rows, const std::int64_t* ptr,
                           const std::int64_t* idx, const double* val,
                           const double* x, double* out) {
  for (std::int64_t i = 0; i < rows; ++i) {
    double acc = 0.0;
    if (val) {
      for (std::int64_t k = ptr[i]; k < ptr[i + 1]; ++k) acc += val[k] * x[idx[k]];
    } else {
      for (std::int64_t k = ptr[i]; k < ptr[i + 1]; ++k) acc += x[idx[k]];
    }
    out[i] = acc;
  }
}

}  // namespace serial

void soft_threshold(std::int64_t n, const double* x, double thr, double* out) {
  const int t = runtime::threads();
#pragma omp parallel for schedule(static) num_threads(t) if (t > 1 && n > 4096)
  for (std::int64_t i = 0; i < n; ++i) {
    const double v = x[i];
    const double m = std::fabs(v) - thr;
    out[i] = m > 0.0 ? (v > 0.0 ? m : -m) : 0.0;
  }
}

void soft_threshold_each(std::int64_t n, const double* x, const double* thr,
                         double* out) {
  const int t = runtime::threads();
#pragma omp parallel for schedule(static) num_threads(t) if (t > 1 && n > 4096)
  for (std::int64_t i = 0; i < n; ++i) {
    const double v = x[i];
    const double m = std::fabs(v) - thr[i];
    out[i] = m > 0.0 ? (v > 0.0 ? m : -m) : 0.0;
  }
}

void compressed_rows_apply(std::int64_t rows, const std::int64_t* ptr,
                           const std::int64_t* idx, const double* val,
                           const double* x, double* out) {
  const int t = runtime::threads();
  // Each row accumulates serially in index order, so the result matches the
  // reference implementation exactly; only the rows are split over threads.
#pragma omp parallel for schedule(static) num_threads(t) if (t > 1 && rows > 64)
  for (std::int64_t i = 0; i < rows; ++i) {
    double acc = 0.0;
    if (val) {
      for (std::int64_t k = ptr[i]; k < ptr[i + 1]; ++k) acc += val[k] * x[idx[k]];
    } else {
      for (std::int64_t k = ptr[i]; k < ptr[i + 1]; ++k) acc += x[idx[k]];
    }
    out[i] = acc;
  }
}

}  // namespace treeagg::kernels
