#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "auase/embedding.hpp"
#include "auase/matrix.hpp"
#include "auase/model.hpp"

namespace auase {

struct ProcrustesResult {
  DenseMatrix W;  // d×d orthogonal
  double residual = 0.0;  // ‖Y W − Y_ref‖_F
};

/// Orthogonal W minimizing ‖Y W − Y_ref‖_F: W = U Vᵀ where YᵀY_ref = U Σ Vᵀ.
ProcrustesResult procrustes_align(const DenseMatrix& y, const DenseMatrix& y_ref);

/// Maximum Euclidean row norm.
double two_to_infinity(const DenseMatrix& m);

struct RateReport {
  std::vector<std::size_t> n_values;
  std::vector<double> errors;
  double slope = 0.0;
  double intercept = 0.0;
};

struct RateOptions {
  std::size_t d = 3;
  SvdOptions svd;
};

/// For each n: sample assignments and a network, embed with AUASE, compute the
/// noise-free embedding of the conditional mean, align the stacked embeddings
/// with one orthogonal W and record the two-to-infinity error, averaged over
/// `reps`. The slope is a least-squares fit of log(error) on log(n).
RateReport consistency_experiment(const ModelSpec& spec, std::span<const std::size_t> n_values,
                                  std::size_t reps, std::uint64_t seed,
                                  const RateOptions& opts = {});

/// Least-squares fit y = slope·x + intercept.
std::pair<double, double> fit_line(std::span<const double> x, std::span<const double> y);

struct NodeTime {
  std::size_t node = 0;
  std::size_t t = 0;
};

enum class PairKind { spatial, temporal, other };

struct StabilityReport {
  std::vector<std::pair<NodeTime, NodeTime>> pairs;
  std::vector<PairKind> kinds;
  std::vector<double> distances;
  /// Median distance between rows in different latent states at the same interval.
  double reference_scale = 0.0;

  double median_distance() const;
  /// median_distance / reference_scale.
  double ratio() const;
};

struct StabilityOptions {
  std::size_t max_pairs = 10000;
  std::uint64_t seed = 0;
};

/// Distances between embedding rows of exchangeable node/time pairs (same
/// latent state). Spatial pairs share t, temporal pairs share the node. All
/// pairs are enumerated when there are at most `max_pairs`; otherwise
/// `max_pairs` are sampled by drawing a row uniformly and a distinct partner
/// uniformly among rows in the same state.
StabilityReport stability_gap(const EmbeddingSequence& emb, const LatentAssignment& z,
                              const StabilityOptions& opts = {});

/// Negative control: an independent d-truncated SVD of each A_C⁽ᵗ⁾, with no
/// shared basis across intervals.
EmbeddingSequence independent_embedding(const DynamicAttributedNetwork& network, std::size_t d,
                                        double alpha, const SvdOptions& opts = {});

/// CSV `n,error`.
void write_rate_csv(std::ostream& out, const RateReport& report);
std::string rate_summary_json(const RateReport& report);
/// CSV `node_a,t_a,node_b,t_b,kind,distance`.
void write_stability_csv(std::ostream& out, const StabilityReport& report);
std::string stability_summary_json(const StabilityReport& report);

}  // namespace auase
