#include "auase/svd.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "auase/error.hpp"
#include "auase/random.hpp"

namespace auase {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> view(const DenseMatrix& m) {
  return {m.data().data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols())};
}

Eigen::Map<RowMajor> view(DenseMatrix& m) {
  return {m.data().data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols())};
}

DenseMatrix to_dense(const Eigen::MatrixXd& m) {
  DenseMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  view(out) = m;
  return out;
}

struct ThinQr {
  DenseMatrix q;
  Eigen::MatrixXd r;
};

// Householder QR; Q stays orthonormal even when the input is rank deficient.
ThinQr thin_qr(const DenseMatrix& y) {
  const auto rows = static_cast<Eigen::Index>(y.rows());
  const auto cols = static_cast<Eigen::Index>(y.cols());
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(view(y));
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
  Eigen::MatrixXd r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  return {to_dense(q), std::move(r)};
}

DenseMatrix gaussian_block(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  DenseMatrix out(rows, cols);
  for (double& v : out.data()) v = rng.normal();
  return out;
}

}  // namespace

void normalize_signs(SvdResult& result) {
  for (std::size_t j = 0; j < result.S.size(); ++j) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < result.U.rows(); ++i) {
      const double a = std::abs(result.U(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (result.U.rows() == 0 || result.U(arg, j) >= 0.0) continue;
    for (std::size_t i = 0; i < result.U.rows(); ++i) result.U(i, j) = -result.U(i, j);
    for (std::size_t i = 0; i < result.V.rows(); ++i) result.V(i, j) = -result.V(i, j);
  }
}

DenseMatrix reconstruct(const SvdResult& result) {
  DenseMatrix scaled = result.U;
  for (std::size_t i = 0; i < scaled.rows(); ++i)
    for (std::size_t j = 0; j < scaled.cols(); ++j) scaled(i, j) *= result.S[j];
  DenseMatrix out(result.U.rows(), result.V.rows());
  view(out).noalias() = view(scaled) * view(result.V).transpose();
  return out;
}

SvdResult truncated_svd(const SparseMatrix& m, std::size_t d, const SvdOptions& opts) {
  const std::size_t min_dim = std::min(m.rows(), m.cols());
  require(d >= 1 && d <= min_dim, "truncated_svd: d = " + std::to_string(d) +
                                      " outside [1, " + std::to_string(min_dim) + "]");
  const std::size_t width = std::min(d + opts.oversampling, min_dim);
  const auto dd = static_cast<Eigen::Index>(d);
  const SparseMatrix mt = m.transpose();

  DenseMatrix q = thin_qr(multiply(m, gaussian_block(m.cols(), width, opts.seed))).q;
  std::vector<double> previous(d, -1.0);
  const std::size_t min_iterations = std::max<std::size_t>(opts.power_iterations, 1);

  for (std::size_t iter = 1;; ++iter) {
    // Mᵀ Q = Qz R, so Qᵀ M = Rᵀ Qzᵀ and the projected problem is Rᵀ = Ur S Vrᵀ.
    ThinQr right = thin_qr(multiply(mt, q));
    Eigen::JacobiSVD<Eigen::MatrixXd> small(right.r.transpose(),
                                            Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd sigma = small.singularValues();
    const Eigen::MatrixXd& ur = small.matrixU();
    const Eigen::MatrixXd& vr = small.matrixV();

    // M Qz is both the residual probe and the next range iterate.
    DenseMatrix next = multiply(m, right.q);
    const Eigen::MatrixXd mv = view(next) * vr.leftCols(dd);
    const Eigen::MatrixXd us = (view(q) * ur.leftCols(dd)) * sigma.head(dd).asDiagonal();
    const double top = sigma(0);
    const double residual = top > 0.0 ? (mv - us).norm() / top : 0.0;

    double change = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double s = sigma(static_cast<Eigen::Index>(i));
      change = std::max(change, top > 0.0 ? std::abs(s - previous[i]) / top : 0.0);
      previous[i] = s;
    }

    const bool converged = iter >= min_iterations && residual <= opts.tolerance &&
                           change <= opts.tolerance;
    if (converged) {
      SvdResult result;
      result.U = to_dense(view(q) * ur.leftCols(dd));
      result.V = to_dense(view(right.q) * vr.leftCols(dd));
      result.S.assign(sigma.data(), sigma.data() + d);
      result.iterations = iter;
      result.residual = residual;
      normalize_signs(result);
      return result;
    }
    if (iter >= opts.max_iterations) {
      std::ostringstream msg;
      msg << "truncated_svd: no convergence after " << iter << " iterations (residual "
          << residual << ", tolerance " << opts.tolerance << ")";
      throw NumericalError(msg.str());
    }
    q = thin_qr(next).q;
  }
}

}  // namespace auase
