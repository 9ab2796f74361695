#include "auase/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "auase/error.hpp"

namespace auase {

// ---------------------------------------------------------------------------
// DenseMatrix

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  require(data_.size() == rows * cols, "DenseMatrix: data length " + std::to_string(data_.size()) +
                                           " != " + std::to_string(rows) + "x" +
                                           std::to_string(cols));
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

DenseMatrix DenseMatrix::row_block(std::size_t first, std::size_t count) const {
  require(first + count <= rows_, "row_block out of range");
  std::vector<double> data(data_.begin() + static_cast<std::ptrdiff_t>(first * cols_),
                           data_.begin() + static_cast<std::ptrdiff_t>((first + count) * cols_));
  return {count, cols_, std::move(data)};
}

DenseMatrix DenseMatrix::col_block(std::size_t first, std::size_t count) const {
  require(first + count <= cols_, "col_block out of range");
  DenseMatrix out(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
  return out;
}

bool DenseMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double frobenius_norm(const DenseMatrix& a) {
  double sum = 0.0;
  for (double v : a.data()) sum += v * v;
  return std::sqrt(sum);
}

double frobenius_diff(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "frobenius_diff: shape mismatch");
  double sum = 0.0;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t k = 0; k < da.size(); ++k) {
    const double diff = da[k] - db[k];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.cols() == b.rows(), "matmul: inner dimension mismatch");
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const auto b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
    }
  }
  return out;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.rows() == b.rows(), "matmul_tn: row count mismatch");
  DenseMatrix out(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const auto a_row = a.row(k);
    const auto b_row = b.row(k);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = a_row[i];
      if (aki == 0.0) continue;
      auto out_row = out.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aki * b_row[j];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// SparseMatrix

namespace {

void check_index_width(std::size_t cols) {
  require(cols <= std::numeric_limits<SparseMatrix::Index>::max(),
          "SparseMatrix: column count exceeds index width");
}

}  // namespace

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::span<const Triplet> triplets) {
  check_index_width(cols);
  for (const auto& t : triplets) {
    require(t.row < rows && t.col < cols,
            "SparseMatrix: triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                ") out of range for " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  std::vector<Triplet> sorted(triplets.begin(), triplets.end());
  std::sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  std::vector<std::size_t> row_ptr(rows + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  col_idx.reserve(sorted.size());
  values.reserve(sorted.size());
  for (std::size_t k = 0; k < sorted.size();) {
    const std::size_t r = sorted[k].row;
    const std::size_t c = sorted[k].col;
    double sum = 0.0;
    for (; k < sorted.size() && sorted[k].row == r && sorted[k].col == c; ++k) sum += sorted[k].value;
    if (sum == 0.0) continue;
    col_idx.push_back(static_cast<Index>(c));
    values.push_back(sum);
    ++row_ptr[r + 1];
  }
  for (std::size_t r = 0; r < rows; ++r) row_ptr[r + 1] += row_ptr[r];

  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_ = std::move(row_ptr);
  m.col_idx_ = std::move(col_idx);
  m.values_ = std::move(values);
  return m;
}

SparseMatrix SparseMatrix::from_csr(std::size_t rows, std::size_t cols,
                                    std::vector<std::size_t> row_ptr, std::vector<Index> col_idx,
                                    std::vector<double> values) {
  check_index_width(cols);
  require(row_ptr.size() == rows + 1 && row_ptr.front() == 0, "from_csr: bad row pointer array");
  require(col_idx.size() == values.size() && row_ptr.back() == values.size(),
          "from_csr: array lengths disagree");
  bool has_zero = false;
  for (std::size_t r = 0; r < rows; ++r) {
    require(row_ptr[r] <= row_ptr[r + 1], "from_csr: row pointers not monotone");
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      require(col_idx[k] < cols, "from_csr: column index out of range");
      require(k == row_ptr[r] || col_idx[k - 1] < col_idx[k],
              "from_csr: columns not strictly increasing in row " + std::to_string(r));
      has_zero = has_zero || values[k] == 0.0;
    }
  }
  if (has_zero) {
    std::size_t write = 0;
    std::size_t read = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t end = row_ptr[r + 1];
      for (; read < end; ++read) {
        if (values[read] == 0.0) continue;
        col_idx[write] = col_idx[read];
        values[write] = values[read];
        ++write;
      }
      row_ptr[r + 1] = write;
    }
    col_idx.resize(write);
    values.resize(write);
  }
  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_ = std::move(row_ptr);
  m.col_idx_ = std::move(col_idx);
  m.values_ = std::move(values);
  return m;
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& dense) {
  check_index_width(dense.cols());
  std::vector<std::size_t> row_ptr(dense.rows() + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  for (std::size_t i = 0; i < dense.rows(); ++i) {
    for (std::size_t j = 0; j < dense.cols(); ++j) {
      const double v = dense(i, j);
      if (v == 0.0) continue;
      col_idx.push_back(static_cast<Index>(j));
      values.push_back(v);
    }
    row_ptr[i + 1] = values.size();
  }
  return from_csr(dense.rows(), dense.cols(), std::move(row_ptr), std::move(col_idx),
                  std::move(values));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<std::size_t> row_ptr(n + 1);
  std::vector<Index> col_idx(n);
  for (std::size_t i = 0; i < n; ++i) {
    row_ptr[i + 1] = i + 1;
    col_idx[i] = static_cast<Index>(i);
  }
  return from_csr(n, n, std::move(row_ptr), std::move(col_idx), std::vector<double>(n, 1.0));
}

SparseMatrix SparseMatrix::zero(std::size_t rows, std::size_t cols) {
  return from_csr(rows, cols, std::vector<std::size_t>(rows + 1, 0), {}, {});
}

SparseMatrix::RowView SparseMatrix::row(std::size_t i) const {
  const std::size_t begin = row_ptr_[i];
  const std::size_t count = row_ptr_[i + 1] - begin;
  return {std::span<const Index>(col_idx_).subspan(begin, count),
          std::span<const double>(values_).subspan(begin, count)};
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  require(i < rows_ && j < cols_, "SparseMatrix::at out of range");
  const auto view = row(i);
  const auto it = std::lower_bound(view.cols.begin(), view.cols.end(), static_cast<Index>(j));
  if (it == view.cols.end() || *it != j) return 0.0;
  return view.values[static_cast<std::size_t>(it - view.cols.begin())];
}

std::vector<Triplet> SparseMatrix::to_triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      out.push_back({i, col_idx_[k], values_[k]});
  return out;
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) out(i, col_idx_[k]) = values_[k];
  return out;
}

SparseMatrix SparseMatrix::transpose() const {
  check_index_width(rows_);
  std::vector<std::size_t> row_ptr(cols_ + 1, 0);
  for (Index c : col_idx_) ++row_ptr[c + 1];
  for (std::size_t c = 0; c < cols_; ++c) row_ptr[c + 1] += row_ptr[c];
  std::vector<std::size_t> cursor(row_ptr.begin(), row_ptr.end() - 1);
  std::vector<Index> col_idx(nnz());
  std::vector<double> values(nnz());
  // Walking rows in order keeps each output row sorted.
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const std::size_t dst = cursor[col_idx_[k]]++;
      col_idx[dst] = static_cast<Index>(i);
      values[dst] = values_[k];
    }
  }
  SparseMatrix m;
  m.rows_ = cols_;
  m.cols_ = rows_;
  m.row_ptr_ = std::move(row_ptr);
  m.col_idx_ = std::move(col_idx);
  m.values_ = std::move(values);
  return m;
}

SparseMatrix SparseMatrix::scaled(double factor) const {
  if (factor == 0.0) return zero(rows_, cols_);
  SparseMatrix m = *this;
  for (double& v : m.values_) v *= factor;
  return m;
}

bool SparseMatrix::is_symmetric(double tolerance) const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (std::abs(values_[k] - at(col_idx_[k], i)) > tolerance) return false;
    }
  }
  return true;
}

double SparseMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return std::sqrt(sum);
}

// ---------------------------------------------------------------------------
// Kernels

std::vector<double> spmv(const SparseMatrix& m, std::span<const double> x) {
  require(x.size() == m.cols(), "spmv: vector length " + std::to_string(x.size()) +
                                    " != cols " + std::to_string(m.cols()));
  std::vector<double> y(m.rows(), 0.0);
  const auto ptr = m.row_ptr();
  const auto cols = m.col_idx();
  const auto vals = m.values();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t k = ptr[i]; k < ptr[i + 1]; ++k) sum += vals[k] * x[cols[k]];
    y[i] = sum;
  }
  return y;
}

std::vector<double> spmv_t(const SparseMatrix& m, std::span<const double> x) {
  require(x.size() == m.rows(), "spmv_t: vector length " + std::to_string(x.size()) +
                                      " != rows " + std::to_string(m.rows()));
  std::vector<double> y(m.cols(), 0.0);
  const auto ptr = m.row_ptr();
  const auto cols = m.col_idx();
  const auto vals = m.values();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    for (std::size_t k = ptr[i]; k < ptr[i + 1]; ++k) y[cols[k]] += vals[k] * xi;
  }
  return y;
}

DenseMatrix multiply(const SparseMatrix& m, const DenseMatrix& x) {
  require(x.rows() == m.cols(), "multiply: inner dimension mismatch");
  const std::size_t width = x.cols();
  DenseMatrix y(m.rows(), width);
  const auto ptr = m.row_ptr();
  const auto cols = m.col_idx();
  const auto vals = m.values();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto out = y.row(i);
    for (std::size_t k = ptr[i]; k < ptr[i + 1]; ++k) {
      const double v = vals[k];
      const auto in = x.row(cols[k]);
      for (std::size_t j = 0; j < width; ++j) out[j] += v * in[j];
    }
  }
  return y;
}

SparseMatrix hconcat(std::span<const SparseMatrix> blocks) {
  require(!blocks.empty(), "hconcat: empty block list");
  const std::size_t rows = blocks.front().rows();
  std::size_t cols = 0;
  std::size_t nnz = 0;
  for (const auto& b : blocks) {
    require(b.rows() == rows, "hconcat: row count mismatch (" + std::to_string(b.rows()) +
                                  " vs " + std::to_string(rows) + ")");
    cols += b.cols();
    nnz += b.nnz();
  }
  check_index_width(cols);
  std::vector<std::size_t> row_ptr(rows + 1, 0);
  std::vector<SparseMatrix::Index> col_idx;
  std::vector<double> values;
  col_idx.reserve(nnz);
  values.reserve(nnz);
  for (std::size_t i = 0; i < rows; ++i) {
    std::size_t offset = 0;
    for (const auto& b : blocks) {
      const auto view = b.row(i);
      for (std::size_t k = 0; k < view.cols.size(); ++k) {
        col_idx.push_back(static_cast<SparseMatrix::Index>(offset + view.cols[k]));
        values.push_back(view.values[k]);
      }
      offset += b.cols();
    }
    row_ptr[i + 1] = values.size();
  }
  return SparseMatrix::from_csr(rows, cols, std::move(row_ptr), std::move(col_idx),
                                std::move(values));
}

// ---------------------------------------------------------------------------
// Triplet text format

SparseMatrix read_triplets(std::istream& in, std::size_t rows, std::size_t cols) {
  std::vector<Triplet> triplets;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long r = 0;
    long long c = 0;
    double v = 0.0;
    if (!(fields >> r)) continue;  // blank or comment-only line
    std::string extra;
    if (!(fields >> c >> v) || (fields >> extra) || r < 0 || c < 0) {
      throw ValidationError("triplet line " + std::to_string(line_no) + ": expected `row col value`");
    }
    triplets.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(c), v});
  }
  return SparseMatrix::from_triplets(rows, cols, triplets);
}

void write_triplets(std::ostream& out, const SparseMatrix& m) {
  const auto old_precision = out.precision(17);
  out << "# " << m.rows() << " x " << m.cols() << ", nnz " << m.nnz() << '\n';
  for (const auto& t : m.to_triplets()) out << t.row << ' ' << t.col << ' ' << t.value << '\n';
  out.precision(old_precision);
}

}  // namespace auase
