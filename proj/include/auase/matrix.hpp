#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace auase {

/// Dense row-major matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  DenseMatrix transpose() const;
  /// Rows [first, first + count).
  DenseMatrix row_block(std::size_t first, std::size_t count) const;
  /// Columns [first, first + count).
  DenseMatrix col_block(std::size_t first, std::size_t count) const;
  bool all_finite() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Immutable compressed-sparse-row matrix.
///
/// Columns within a row are strictly increasing and every stored value is
/// nonzero. Duplicate triplets are summed at construction and zeros dropped,
/// so each matrix has exactly one representation.
class SparseMatrix {
 public:
  using Index = std::uint32_t;

  struct RowView {
    std::span<const Index> cols;
    std::span<const double> values;
  };

  SparseMatrix() = default;

  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::span<const Triplet> triplets);
  /// Takes ownership of CSR arrays. Columns must be strictly increasing per
  /// row; zero values are removed.
  static SparseMatrix from_csr(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                               std::vector<Index> col_idx, std::vector<double> values);
  static SparseMatrix from_dense(const DenseMatrix& dense);
  static SparseMatrix identity(std::size_t n);
  static SparseMatrix zero(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  RowView row(std::size_t i) const;
  /// Entry lookup, zero when not stored.
  double at(std::size_t i, std::size_t j) const;

  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const Index> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  std::vector<Triplet> to_triplets() const;
  DenseMatrix to_dense() const;
  SparseMatrix transpose() const;
  SparseMatrix scaled(double factor) const;
  bool is_symmetric(double tolerance = 0.0) const;
  double frobenius_norm() const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

/// y = M x.
std::vector<double> spmv(const SparseMatrix& m, std::span<const double> x);
/// y = Mᵀ x.
std::vector<double> spmv_t(const SparseMatrix& m, std::span<const double> x);

/// M X for a dense block X (M.cols × k).
DenseMatrix multiply(const SparseMatrix& m, const DenseMatrix& x);

/// Horizontal concatenation [B₁ | B₂ | …]; all blocks share a row count.
SparseMatrix hconcat(std::span<const SparseMatrix> blocks);

/// ‖A − B‖_F.
double frobenius_diff(const DenseMatrix& a, const DenseMatrix& b);
double frobenius_norm(const DenseMatrix& a);

/// A B.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// Aᵀ B.
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);

/// Whitespace-separated `row col value` lines, 0-indexed; `#` starts a comment.
SparseMatrix read_triplets(std::istream& in, std::size_t rows, std::size_t cols);
void write_triplets(std::ostream& out, const SparseMatrix& m);

}  // namespace auase
