#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "auase/embedding.hpp"
#include "auase/matrix.hpp"
#include "auase/network.hpp"

namespace auase {

/// One latent-state sequence (length T, states in [0, K)) and the
/// probability that a node follows it.
struct Trajectory {
  std::vector<int> states;
  double probability = 0.0;
};

/// Dynamic stochastic block model with Gaussian covariates.
///
/// Edges: A_ij⁽ᵗ⁾ ~ Bernoulli(ρ·B[z_i⁽ᵗ⁾, z_j⁽ᵗ⁾]) for i < j.
/// Covariates: C_iℓ⁽ᵗ⁾ ~ Normal(D[z_i⁽ᵗ⁾, ℓ], σ²).
struct ModelSpec {
  DenseMatrix B;  // K×K, symmetric, entries in [0, 1]
  DenseMatrix D;  // K×p
  double sigma = 1.0;
  double rho = 1.0;
  double alpha = 0.2;
  std::vector<Trajectory> trajectories;

  std::size_t communities() const { return B.rows(); }
  std::size_t covariates() const { return D.cols(); }
  std::size_t intervals() const {
    return trajectories.empty() ? 0 : trajectories.front().states.size();
  }
  void validate() const;
};

/// Latent states z (n×T, node-major) plus the trajectory each node drew.
struct LatentAssignment {
  std::size_t n = 0;
  std::size_t T = 0;
  std::vector<int> states;
  std::vector<std::size_t> trajectory;

  int at(std::size_t node, std::size_t t) const { return states[node * T + t]; }
  std::vector<int> interval(std::size_t t) const;
};

LatentAssignment sample_assignments(const ModelSpec& spec, std::size_t n, std::uint64_t seed);
SparseMatrix sample_adjacency(const ModelSpec& spec, std::span<const int> labels,
                              std::uint64_t seed);
DenseMatrix sample_covariates(const ModelSpec& spec, std::span<const int> labels,
                              std::uint64_t seed);
/// Samples every interval with seeds derived from (seed, t).
DynamicAttributedNetwork sample_network(const ModelSpec& spec, const LatentAssignment& z,
                                        std::uint64_t seed);

/// [(1−α)A  αC; αCᵀ  0], (n+p)×(n+p).
SparseMatrix build_augmented(const SparseMatrix& adjacency, const DenseMatrix& covariates,
                             double alpha);

/// E[A_C⁽ᵗ⁾ | z] per interval: network block (1−α)ρB, covariate blocks αρ^{1/2}D.
/// The diagonal of the network block keeps its model value (1−α)ρB[z_i, z_i].
std::vector<SparseMatrix> mean_augmented(const ModelSpec& spec, const LatentAssignment& z);
/// P_C = [E A_C⁽¹⁾ | … | E A_C⁽ᵀ⁾].
SparseMatrix mean_unfolded(const ModelSpec& spec, const LatentAssignment& z);

/// Canonical noise-free embedding: blocks of V_P Σ_P^{1/2} restricted to node rows.
/// Writes a warning to stderr when σ_d is numerically zero.
EmbeddingSequence noise_free_embedding(const SparseMatrix& mean, std::size_t d,
                                       std::size_t intervals, std::size_t n,
                                       double alpha = 0.0, const SvdOptions& opts = {});

/// Model config text: `key = value` lines, matrices as rows after `B =` / `D =`
/// (tokens `v*count` repeat a value), and one `trajectory = prob : s₁ … s_T`
/// line per trajectory. States are 0-based.
ModelSpec parse_model_spec(std::istream& in);
ModelSpec parse_model_spec(const std::string& text);
ModelSpec load_model_spec(const std::string& path);
std::string format_model_spec(const ModelSpec& spec);

/// Built-in configs, compiled from configs/*.cfg.
ModelSpec synthetic_model_spec();
ModelSpec rate_check_model_spec();

/// CSV `node,trajectory,z_0,…,z_{T-1}`.
void write_assignment_csv(std::ostream& out, const LatentAssignment& z);
LatentAssignment read_assignment_csv(std::istream& in);

}  // namespace auase
