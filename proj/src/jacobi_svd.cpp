#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "auase/error.hpp"
#include "auase/svd.hpp"

namespace auase {

namespace {

constexpr std::size_t kOracleCap = 512;
constexpr std::size_t kMaxSweeps = 80;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Gram-Schmidt against the accepted columns (stored as rows of `basis`),
// trying standard basis vectors until one survives.
void complete_orthonormal_row(DenseMatrix& basis, std::size_t target, std::size_t accepted) {
  const std::size_t dim = basis.cols();
  for (std::size_t e = 0; e < dim; ++e) {
    std::vector<double> v(dim, 0.0);
    v[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < accepted; ++k) {
        if (k == target) continue;
        const auto b = basis.row(k);
        const double proj = dot(b, v);
        for (std::size_t i = 0; i < dim; ++i) v[i] -= proj * b[i];
      }
    }
    const double norm = std::sqrt(dot(v, v));
    if (norm > 1e-8) {
      auto row = basis.row(target);
      for (std::size_t i = 0; i < dim; ++i) row[i] = v[i] / norm;
      return;
    }
  }
  throw NumericalError("dense_svd_oracle: could not complete orthonormal basis");
}

}  // namespace

SvdResult dense_svd_oracle(const DenseMatrix& m) {
  require(m.rows() <= kOracleCap && m.cols() <= kOracleCap,
          "dense_svd_oracle: size " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
              " exceeds cap " + std::to_string(kOracleCap));
  require(m.rows() > 0 && m.cols() > 0, "dense_svd_oracle: empty matrix");

  // Orthogonalize the columns of a tall matrix; for wide input work on Mᵀ.
  const bool wide = m.rows() < m.cols();
  const DenseMatrix a = wide ? m.transpose() : m;
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();

  // Columns are stored as rows so every rotation touches contiguous memory.
  DenseMatrix work = a.transpose();           // cols × rows
  DenseMatrix right = DenseMatrix::identity(cols);  // row j = j-th right vector

  const double eps = std::numeric_limits<double>::epsilon();
  std::size_t sweeps = 0;
  bool rotated = true;
  while (rotated) {
    require(sweeps < kMaxSweeps, "dense_svd_oracle: Jacobi sweeps exhausted");
    rotated = false;
    ++sweeps;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        auto cp = work.row(p);
        auto cq = work.row(q);
        const double alpha = dot(cp, cp);
        const double beta = dot(cq, cq);
        const double gamma = dot(cp, cq);
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const double x = cp[i];
          const double y = cq[i];
          cp[i] = c * x - s * y;
          cq[i] = s * x + c * y;
        }
        auto vp = right.row(p);
        auto vq = right.row(q);
        for (std::size_t i = 0; i < cols; ++i) {
          const double x = vp[i];
          const double y = vq[i];
          vp[i] = c * x - s * y;
          vq[i] = s * x + c * y;
        }
      }
    }
  }

  std::vector<double> sigma(cols);
  for (std::size_t j = 0; j < cols; ++j) sigma[j] = std::sqrt(dot(work.row(j), work.row(j)));
  std::vector<std::size_t> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  const double top = sigma[order.front()];
  const double negligible = top * eps * static_cast<double>(std::max(rows, cols));
  DenseMatrix left_rows(cols, rows);  // row j = j-th left vector
  DenseMatrix right_rows(cols, cols);
  std::vector<double> sorted(cols);
  std::size_t accepted = 0;
  std::vector<std::size_t> deficient;
  for (std::size_t k = 0; k < cols; ++k) {
    const std::size_t j = order[k];
    sorted[k] = sigma[j];
    std::copy_n(right.row(j).begin(), cols, right_rows.row(k).begin());
    if (sigma[j] > negligible) {
      auto dst = left_rows.row(k);
      const auto src = work.row(j);
      for (std::size_t i = 0; i < rows; ++i) dst[i] = src[i] / sigma[j];
      ++accepted;
    } else {
      sorted[k] = 0.0;
      deficient.push_back(k);
    }
  }
  // Null directions carry no information about M; any orthonormal completion works.
  for (std::size_t k : deficient) complete_orthonormal_row(left_rows, k, cols);

  SvdResult result;
  DenseMatrix u = left_rows.transpose();
  DenseMatrix v = right_rows.transpose();
  if (wide) std::swap(u, v);
  result.U = std::move(u);
  result.V = std::move(v);
  result.S = std::move(sorted);
  result.iterations = sweeps;
  normalize_signs(result);

  const double norm = frobenius_norm(m);
  result.residual = norm > 0.0 ? frobenius_diff(m, reconstruct(result)) / norm : 0.0;
  return result;
}

}  // namespace auase
