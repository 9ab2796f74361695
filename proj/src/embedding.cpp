#include "auase/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "auase/error.hpp"
#include "auase/model.hpp"

namespace auase {

DenseMatrix EmbeddingSequence::stacked() const {
  DenseMatrix out(blocks.size() * n, d);
  auto dst = out.data();
  std::size_t offset = 0;
  for (const auto& b : blocks) {
    std::copy(b.data().begin(), b.data().end(), dst.begin() + static_cast<std::ptrdiff_t>(offset));
    offset += b.size();
  }
  return out;
}

SparseMatrix unfold(const DynamicAttributedNetwork& network, double alpha) {
  network.validate();
  std::vector<SparseMatrix> blocks;
  blocks.reserve(network.intervals());
  for (std::size_t t = 0; t < network.intervals(); ++t)
    blocks.push_back(build_augmented(network.adjacency[t], network.covariates[t], alpha));
  return hconcat(blocks);
}

EmbeddingSequence embedding_from_svd(const SvdResult& svd, std::size_t intervals,
                                     std::size_t block_rows, std::size_t n, double alpha) {
  require(svd.V.rows() == intervals * block_rows,
          "embedding_from_svd: V has " + std::to_string(svd.V.rows()) + " rows, expected " +
              std::to_string(intervals * block_rows));
  require(n <= block_rows, "embedding_from_svd: n exceeds block size");
  const std::size_t d = svd.S.size();
  std::vector<double> scale(d);
  for (std::size_t k = 0; k < d; ++k) scale[k] = std::sqrt(svd.S[k]);

  EmbeddingSequence emb;
  emb.n = n;
  emb.d = d;
  emb.alpha = alpha;
  emb.singular_values = svd.S;
  for (std::size_t t = 0; t < intervals; ++t) {
    DenseMatrix block(n, d);
    for (std::size_t i = 0; i < n; ++i) {
      const auto src = svd.V.row(t * block_rows + i);
      auto dst = block.row(i);
      for (std::size_t k = 0; k < d; ++k) dst[k] = src[k] * scale[k];
    }
    emb.blocks.push_back(std::move(block));
  }
  return emb;
}

EmbeddingSequence auase(const DynamicAttributedNetwork& network, std::size_t d, double alpha,
                        const SvdOptions& opts) {
  require(alpha >= 0.0 && alpha <= 1.0, "auase: alpha must lie in [0, 1]");
  const std::size_t block_rows = network.n + network.p;
  require(d >= 1 && d <= block_rows,
          "auase: d = " + std::to_string(d) + " outside [1, " + std::to_string(block_rows) + "]");
  const SparseMatrix unfolded = unfold(network, alpha);
  const SvdResult svd = truncated_svd(unfolded, d, opts);
  return embedding_from_svd(svd, network.intervals(), block_rows, network.n, alpha);
}

EmbeddingSequence uase(const DynamicAttributedNetwork& network, std::size_t d,
                       const SvdOptions& opts) {
  return auase(network, d, 0.0, opts);
}

EmbeddingSequence degree_correct(const EmbeddingSequence& embedding) {
  EmbeddingSequence out = embedding;
  for (auto& block : out.blocks) {
    for (std::size_t i = 0; i < block.rows(); ++i) {
      auto row = block.row(i);
      double norm = 0.0;
      for (double v : row) norm += v * v;
      norm = std::sqrt(norm);
      if (norm <= 1e-12) {
        std::fill(row.begin(), row.end(), 0.0);
      } else {
        for (double& v : row) v /= norm;
      }
    }
  }
  out.degree_corrected = true;
  return out;
}

std::size_t select_dimension(std::span<const double> singular_values, std::size_t d_max) {
  std::size_t L = singular_values.size();
  if (d_max != 0) L = std::min(L, d_max);
  require(L >= 2, "select_dimension: need at least 2 values");
  const auto x = singular_values.first(L);
  for (std::size_t i = 0; i + 1 < L; ++i)
    require(x[i] >= x[i + 1], "select_dimension: values must be descending");

  const double count = static_cast<double>(L);
  std::size_t best = 1;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (std::size_t q = 1; q < L; ++q) {
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < q; ++i) m1 += x[i];
    for (std::size_t i = q; i < L; ++i) m2 += x[i];
    m1 /= static_cast<double>(q);
    m2 /= static_cast<double>(L - q);
    double ss = 0.0;
    for (std::size_t i = 0; i < q; ++i) ss += (x[i] - m1) * (x[i] - m1);
    for (std::size_t i = q; i < L; ++i) ss += (x[i] - m2) * (x[i] - m2);
    const double var = ss / count;
    // With the MLE variance the quadratic term sums to L/2 for every split.
    const double ll = var > 0.0 ? -0.5 * count * (std::log(2.0 * std::numbers::pi * var) + 1.0)
                                : std::numeric_limits<double>::infinity();
    if (ll > best_ll) {
      best_ll = ll;
      best = q;
    }
  }
  return best;
}

std::size_t default_max_dimension(std::size_t n, std::size_t p) {
  require(n + p >= 2, "default_max_dimension: n + p must be at least 2");
  return std::min<std::size_t>(100, n + p - 1);
}

DynamicAttributedNetwork standardize_covariates(const DynamicAttributedNetwork& network) {
  network.validate();
  DynamicAttributedNetwork out = network;
  const double rows = static_cast<double>(network.n * network.intervals());
  for (std::size_t l = 0; l < network.p; ++l) {
    double mean = 0.0;
    for (const auto& c : network.covariates)
      for (std::size_t i = 0; i < network.n; ++i) mean += c(i, l);
    mean /= rows;
    double var = 0.0;
    for (const auto& c : network.covariates)
      for (std::size_t i = 0; i < network.n; ++i) var += (c(i, l) - mean) * (c(i, l) - mean);
    const double sd = std::sqrt(var / rows);
    const double scale = sd > 0.0 ? 1.0 / sd : 1.0;
    for (auto& c : out.covariates)
      for (std::size_t i = 0; i < network.n; ++i) c(i, l) = (c(i, l) - mean) * scale;
  }
  return out;
}

}  // namespace auase
