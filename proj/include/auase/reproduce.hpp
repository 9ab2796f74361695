#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "auase/embedding.hpp"
#include "auase/model.hpp"
#include "auase/stability.hpp"

namespace auase {

struct SyntheticOptions {
  std::size_t n = 1000;
  std::size_t d = 3;
  /// AUASE mixing weight; UASE is always α = 0.
  double alpha = 0.2;
  std::size_t max_pairs = 10000;
  SvdOptions svd;
};

struct SyntheticRun {
  ModelSpec spec;
  LatentAssignment z;
  DynamicAttributedNetwork network;
  EmbeddingSequence auase_embedding;
  EmbeddingSequence uase_embedding;
  /// Per interval: ARI of k-means (k = distinct states at t) on AUASE against the states.
  std::vector<double> auase_ari;
  /// Per interval where states 1 and 2 both occur: ARI of 2-means on the UASE
  /// rows of those nodes against their states. Intervals without both are absent.
  std::vector<std::pair<std::size_t, double>> uase_ari_1_vs_2;
  StabilityReport auase_stability;
  StabilityReport control_stability;  // independent per-interval SVDs
};

/// Seed layout: assignments, network, SVD, k-means and pair sampling each use
/// mix_seed(seed, 0..4).
SyntheticRun run_synthetic(const ModelSpec& spec, std::uint64_t seed,
                           const SyntheticOptions& opts = {});

/// Per-interval k-means ARI of an embedding against the latent states.
std::vector<double> interval_ari(const EmbeddingSequence& emb, const LatentAssignment& z,
                                 std::uint64_t seed);

/// Rows: method,t,community,dim_0,… with community = trajectory index.
void write_community_means(std::ostream& out, const std::string& method,
                           const EmbeddingSequence& emb, const LatentAssignment& z);

/// Projects the stacked embedding onto its top two principal axes. Returns (T·n)×2.
DenseMatrix pca_2d(const EmbeddingSequence& emb);

/// Runs the built-in synthetic experiment and writes every artifact plus a
/// manifest into out_dir. `parameters` is recorded verbatim in the manifest.
SyntheticRun reproduce_synthetic(const std::filesystem::path& out_dir, std::uint64_t seed,
                                 const SyntheticOptions& opts = {},
                                 const std::string& parameters = "");

}  // namespace auase
