#pragma once

#include <cstdint>

// Shared computational kernels.  Each kernel writes disjoint output slots,
// so the OpenMP variants are bitwise-deterministic at any thread count; the
// serial namespace keeps straight-line reference implementations that the
// tests and the benchmark compare against.
//
// Sparse arguments use compressed index arrays: `ptr` has one entry per
// major slot plus a terminator, `idx` lists minor indices, `val` may be
// null to mean an all-ones pattern (the aggregation matrix case).

namespace treeagg::kernels {

namespace serial {

void soft_threshold(std::int64_t n, const double* x, double thr, double* out);
void soft_threshold_each(std::int64_t n, const double* x, const double* thr,
                         double* out);

// out[i] = sum_k val[k] * x[idx[k]] over row i's slice; one slot per row.
void compressed_rows_apply(std::int64_t rows, const std::int64_t* ptr,
                           const std::int64_t* idx, const double* val,
                           const double* x, double* out);

}  // namespace serial

void soft_threshold(std::int64_t n, const double* x, double thr, double* out);
void soft_threshold_each(std::int64_t n, const double* x, const double* thr,
                         double* out);
void compressed_rows_apply(std::int64_t rows, const std::int64_t* ptr,
                           const std::int64_t* idx, const double* val,
                           const double* x, double* out);

}  // namespace treeagg::kernels
