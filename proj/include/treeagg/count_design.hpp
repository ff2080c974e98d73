#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

// Design matrix of nonnegative counts, stored compressed by column and by
// row so both X v and X^T w stream over contiguous index slices.  Dense
// construction is the fallback path for small or saturated designs; dense()
// rematerializes on demand (the ADMM workspace does this once for its SVD).

namespace treeagg {

struct DesignEntry {
  std::int64_t row;
  std::int64_t col;
  double value;
};

class CountDesign {
 public:
  explicit CountDesign(const Eigen::MatrixXd& dense);
  // Duplicate (row, col) entries are summed.  Entries must be finite and
  // nonnegative; indices are range-checked.
  CountDesign(std::int64_t rows, std::int64_t cols,
              const std::vector<DesignEntry>& entries);

  std::int64_t rows() const { return n_; }
  std::int64_t cols() const { return p_; }
  std::int64_t nonzeros() const { return static_cast<std::int64_t>(val_csc_.size()); }

  Eigen::MatrixXd dense() const;

  Eigen::VectorXd multiply(const Eigen::VectorXd& v) const;            // X v
  Eigen::VectorXd multiply_transpose(const Eigen::VectorXd& w) const;  // X^T w

  double col_dot(std::int64_t j, const Eigen::VectorXd& w) const;
  double col_sq_norm(std::int64_t j) const { return col_sq_norm_[j]; }
  std::span<const std::int64_t> col_rows(std::int64_t j) const;
  std::span<const double> col_values(std::int64_t j) const;

  // Column sum over a feature subset: X * 1_{subset} (an aggregated column).
  Eigen::VectorXd sum_cols(std::span<const int> features) const;

  CountDesign select_rows(const std::vector<std::int64_t>& keep) const;
  CountDesign scaled(double factor) const;

  double total_sum() const;

 private:
  CountDesign() = default;
  void build_from_triplets(std::vector<DesignEntry> entries);
  void finalize();

  std::int64_t n_ = 0, p_ = 0;
  std::vector<std::int64_t> col_ptr_, row_idx_;
  std::vector<double> val_csc_;
  std::vector<std::int64_t> row_ptr_, col_idx_;
  std::vector<double> val_csr_;
  std::vector<double> col_sq_norm_;
};

// Rescaled copy with ||X 1_p||_2^2 = n, the normalization the prediction
// error analysis assumes.  `scale` maps coefficients back: a fit beta on the
// scaled design corresponds to scale * beta on the original one.
struct NormalizedDesign {
  CountDesign X;
  double scale = 1.0;
};
NormalizedDesign normalize_for_theory(const CountDesign& X);

}  // namespace treeagg
