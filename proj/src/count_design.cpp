#include "treeagg/count_design.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "treeagg/kernels.hpp"

namespace treeagg {

CountDesign::CountDesign(const Eigen::MatrixXd& dense) {
  if (dense.rows() == 0 || dense.cols() == 0)
    throw std::invalid_argument("count design: empty matrix");
  std::vector<DesignEntry> entries;
  for (std::int64_t j = 0; j < dense.cols(); ++j)
    for (std::int64_t i = 0; i < dense.rows(); ++i)
      if (dense(i, j) != 0.0) entries.push_back({i, j, dense(i, j)});
  n_ = dense.rows();
  p_ = dense.cols();
  build_from_triplets(std::move(entries));
}

CountDesign::CountDesign(std::int64_t rows, std::int64_t cols,
                         const std::vector<DesignEntry>& entries) {
  if (rows <= 0 || cols <= 0)
    throw std::invalid_argument("count design: empty matrix");
  n_ = rows;
  p_ = cols;
  build_from_triplets(entries);
}

void CountDesign::build_from_triplets(std::vector<DesignEntry> entries) {
  for (const auto& e : entries) {
    if (e.row < 0 || e.row >= n_ || e.col < 0 || e.col >= p_)
      throw std::invalid_argument("count design: entry index out of range");
    if (!std::isfinite(e.value) || e.value < 0.0)
      throw std::invalid_argument(
          "count design: entries must be finite and nonnegative");
  }
  std::sort(entries.begin(), entries.end(),
            [](const DesignEntry& a, const DesignEntry& b) {
              return a.col != b.col ? a.col < b.col : a.row < b.row;
            });
  // Sum duplicates while streaming into CSC.
  col_ptr_.assign(p_ + 1, 0);
  for (std::size_t k = 0; k < entries.size();) {
    std::size_t k2 = k + 1;
    double v = entries[k].value;
    while (k2 < entries.size() && entries[k2].col == entries[k].col &&
           entries[k2].row == entries[k].row)
      v += entries[k2++].value;
    if (v != 0.0) {
      row_idx_.push_back(entries[k].row);
      val_csc_.push_back(v);
      ++col_ptr_[entries[k].col + 1];
    }
    k = k2;
  }
  for (std::int64_t j = 0; j < p_; ++j) col_ptr_[j + 1] += col_ptr_[j];
  finalize();
}

void CountDesign::finalize() {
  // CSR mirror built by counting sort over rows.
  row_ptr_.assign(n_ + 1, 0);
  for (std::int64_t i : row_idx_) ++row_ptr_[i + 1];
  for (std::int64_t i = 0; i < n_; ++i) row_ptr_[i + 1] += row_ptr_[i];
  col_idx_.resize(row_idx_.size());
  val_csr_.resize(row_idx_.size());
  std::vector<std::int64_t> cursor(row_ptr_.begin(), row_ptr_.end() - 1);
  for (std::int64_t j = 0; j < p_; ++j)
    for (std::int64_t k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) {
      const std::int64_t slot = cursor[row_idx_[k]]++;
      col_idx_[slot] = j;
      val_csr_[slot] = val_csc_[k];
    }
  col_sq_norm_.assign(p_, 0.0);
  for (std::int64_t j = 0; j < p_; ++j)
    for (std::int64_t k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k)
      col_sq_norm_[j] += val_csc_[k] * val_csc_[k];
}

Eigen::MatrixXd CountDesign::dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_, p_);
  for (std::int64_t j = 0; j < p_; ++j)
    for (std::int64_t k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k)
      out(row_idx_[k], j) = val_csc_[k];
  return out;
}

Eigen::VectorXd CountDesign::multiply(const Eigen::VectorXd& v) const {
  if (v.size() != p_) throw std::invalid_argument("count design: X v size");
  Eigen::VectorXd out(n_);
  kernels::compressed_rows_apply(n_, row_ptr_.data(), col_idx_.data(),
                                 val_csr_.data(), v.data(), out.data());
  return out;
}

Eigen::VectorXd CountDesign::multiply_transpose(const Eigen::VectorXd& w) const {
  if (w.size() != n_) throw std::invalid_argument("count design: X^T w size");
  Eigen::VectorXd out(p_);
  kernels::compressed_rows_apply(p_, col_ptr_.data(), row_idx_.data(),
                                 val_csc_.data(), w.data(), out.data());
  return out;
}

double CountDesign::col_dot(std::int64_t j, const Eigen::VectorXd& w) const {
  double acc = 0.0;
  for (std::int64_t k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k)
    acc += val_csc_[k] * w[row_idx_[k]];
  return acc;
}

std::span<const std::int64_t> CountDesign::col_rows(std::int64_t j) const {
  return {row_idx_.data() + col_ptr_[j],
          static_cast<std::size_t>(col_ptr_[j + 1] - col_ptr_[j])};
}

std::span<const double> CountDesign::col_values(std::int64_t j) const {
  return {val_csc_.data() + col_ptr_[j],
          static_cast<std::size_t>(col_ptr_[j + 1] - col_ptr_[j])};
}

Eigen::VectorXd CountDesign::sum_cols(std::span<const int> features) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_);
  for (int j : features)
    for (std::int64_t k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k)
      out[row_idx_[k]] += val_csc_[k];
  return out;
}

CountDesign CountDesign::select_rows(const std::vector<std::int64_t>& keep) const {
  if (keep.empty()) throw std::invalid_argument("count design: empty row subset");
  std::vector<DesignEntry> entries;
  for (std::size_t r = 0; r < keep.size(); ++r) {
    const std::int64_t i = keep[r];
    if (i < 0 || i >= n_)
      throw std::invalid_argument("count design: row subset out of range");
    for (std::int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      entries.push_back({static_cast<std::int64_t>(r), col_idx_[k], val_csr_[k]});
  }
  return CountDesign(static_cast<std::int64_t>(keep.size()), p_, entries);
}

double CountDesign::total_sum() const {
  double acc = 0.0;
  for (double v : val_csc_) acc += v;
  return acc;
}

CountDesign CountDesign::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw std::invalid_argument("count design: scale factor must be positive");
  CountDesign out;
  out.n_ = n_;
  out.p_ = p_;
  out.col_ptr_ = col_ptr_;
  out.row_idx_ = row_idx_;
  out.val_csc_ = val_csc_;
  for (double& v : out.val_csc_) v *= factor;
  out.finalize();
  return out;
}

NormalizedDesign normalize_for_theory(const CountDesign& X) {
  const double norm =
      X.multiply(Eigen::VectorXd::Ones(X.cols())).norm();
  if (!(norm > 0.0))
    throw std::invalid_argument("normalize_for_theory: all-zero design");
  const double factor = std::sqrt(static_cast<double>(X.rows())) / norm;
  return {X.scaled(factor), factor};
}

}  // namespace treeagg
