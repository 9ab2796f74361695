#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "auase/matrix.hpp"
#include "auase/network.hpp"
#include "auase/svd.hpp"

namespace auase {

/// Per-interval node embeddings Ŷ⁽ᵗ⁾ (n×d each) with the singular values
/// they were scaled by.
struct EmbeddingSequence {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<DenseMatrix> blocks;
  std::vector<double> singular_values;
  double alpha = 0.0;
  bool degree_corrected = false;

  std::size_t intervals() const { return blocks.size(); }
  /// All blocks stacked vertically, interval-major: (T·n) × d.
  DenseMatrix stacked() const;
};

/// A_C = [A_C⁽¹⁾ | … | A_C⁽ᵀ⁾], shape (n+p) × T(n+p).
SparseMatrix unfold(const DynamicAttributedNetwork& network, double alpha);

/// Splits the right singular vectors into T blocks of `block_rows` rows,
/// scales them by Σ^{1/2} and keeps the first n rows of each block.
EmbeddingSequence embedding_from_svd(const SvdResult& svd, std::size_t intervals,
                                     std::size_t block_rows, std::size_t n, double alpha);

/// Attributed unfolded adjacency spectral embedding.
EmbeddingSequence auase(const DynamicAttributedNetwork& network, std::size_t d, double alpha,
                        const SvdOptions& opts = {});

/// Unattributed special case (α = 0).
EmbeddingSequence uase(const DynamicAttributedNetwork& network, std::size_t d,
                       const SvdOptions& opts = {});

/// Projects every row with norm > 1e-12 onto the unit sphere; other rows stay zero.
EmbeddingSequence degree_correct(const EmbeddingSequence& embedding);

/// Profile-likelihood elbow over the first `d_max` values (all of them when
/// d_max is 0). For each split q the values are modelled as two Gaussians
/// with a shared variance; the q with the largest log-likelihood wins,
/// smallest q on ties.
std::size_t select_dimension(std::span<const double> singular_values, std::size_t d_max = 0);

/// Default cap for dimension selection: min(100, n + p − 1).
std::size_t default_max_dimension(std::size_t n, std::size_t p);

/// Centers and scales every covariate column over all (node, interval) rows.
/// Constant columns are only centered.
DynamicAttributedNetwork standardize_covariates(const DynamicAttributedNetwork& network);

}  // namespace auase
