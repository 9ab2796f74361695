#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "auase/matrix.hpp"

namespace auase {

struct SvdOptions {
  /// Extra basis vectors carried beyond d.
  std::size_t oversampling = 10;
  /// Minimum number of power (subspace) iterations.
  std::size_t power_iterations = 4;
  /// Hard budget; exceeding it raises NumericalError.
  std::size_t max_iterations = 1000;
  std::uint64_t seed = 0;
  /// Relative stopping threshold on singular value change and on the
  /// residual ‖M V − U S‖_F / σ₁.
  double tolerance = 1e-10;
};

/// M ≈ U diag(S) Vᵀ with U (m×r), V (k×r), S descending and nonnegative.
struct SvdResult {
  DenseMatrix U;
  std::vector<double> S;
  DenseMatrix V;
  std::size_t iterations = 0;
  /// truncated_svd: ‖M V − U S‖_F / σ₁ at exit. dense_svd_oracle: ‖M − U S Vᵀ‖_F / ‖M‖_F.
  double residual = 0.0;
};

/// d-truncated SVD by randomized subspace iteration.
///
/// A Gaussian test block of width d + oversampling seeds a range finder;
/// alternating products with M and Mᵀ (re-orthonormalized every step) refine
/// it until both stopping conditions in SvdOptions hold. The small projected
/// problem is solved densely. Output is a pure function of (M, d, opts).
///
/// Each singular pair is sign-normalized so that the largest-magnitude entry
/// of the U column is positive.
SvdResult truncated_svd(const SparseMatrix& m, std::size_t d, const SvdOptions& opts = {});

/// Full thin SVD by one-sided (Hestenes) Jacobi rotations. Test oracle and
/// small-matrix workhorse; rows and cols are capped at 512.
SvdResult dense_svd_oracle(const DenseMatrix& m);

/// Flip singular pairs so the largest-magnitude entry of each U column is positive.
void normalize_signs(SvdResult& result);

/// U diag(S) Vᵀ.
DenseMatrix reconstruct(const SvdResult& result);

}  // namespace auase
