#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "auase/embedding.hpp"
#include "auase/matrix.hpp"
#include "auase/network.hpp"
#include "auase/svd.hpp"

namespace auase {

struct LabeledDataset {
  DenseMatrix features;
  std::vector<int> labels;
  std::vector<std::size_t> groups;  // interval of each row

  void validate() const;
};

struct TemporalSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// First ⌈fraction·T⌉ intervals train, the rest test (0-based interval ids).
TemporalSplit temporal_split(std::size_t T, double train_fraction);

/// Majority vote among the k nearest Euclidean neighbours; ties go to the
/// smallest class. Equidistant neighbours are ranked by training row index.
std::vector<int> knn_classify(const LabeledDataset& train, const DenseMatrix& test_features,
                              std::size_t k);
/// Fraction of the k nearest neighbours with label `positive`.
std::vector<double> knn_scores(const LabeledDataset& train, const DenseMatrix& test_features,
                               std::size_t k, int positive = 1);

/// Predicts the most frequent training label (smallest on ties) for every test row.
std::vector<int> most_common_label(std::span<const int> train_labels, std::size_t test_count);

struct ClassificationMetrics {
  double accuracy = 0.0;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  double weighted_f1 = 0.0;
};

/// Macro and weighted averages run over classes present in `truth`.
ClassificationMetrics f1_scores(std::span<const int> predicted, std::span<const int> truth);
double accuracy(std::span<const int> predicted, std::span<const int> truth);

struct NodePair {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t t = 0;

  friend bool operator==(const NodePair&, const NodePair&) = default;
};

struct LinkSample {
  std::vector<NodePair> pairs;
  DenseMatrix features;  // [Ŷ⁽ᵗ⁾_i, Ŷ⁽ᵗ⁾_j], 2d columns
  std::vector<int> labels;
};

/// Positives: edges i < j of A⁽ᵗ⁺¹⁾. Negatives: the same number of distinct
/// non-edges of A⁽ᵗ⁺¹⁾, drawn uniformly by rejection with at most 100 draws
/// per requested negative. When max_positives > 0 and there are more edges, a
/// uniform subset of that size is kept. Features come from interval t.
LinkSample link_samples(const EmbeddingSequence& emb, const DynamicAttributedNetwork& network,
                        std::size_t t, std::uint64_t seed, std::size_t max_positives = 0);

/// P(score⁺ > score⁻) + ½ P(score⁺ = score⁻), by sorting with average ranks.
double auc_roc(std::span<const double> scores, std::span<const int> labels);

struct LinkPredictionOptions {
  std::size_t k = 15;
  std::size_t reps = 10;
  std::uint64_t seed = 0;
  /// Positive pairs kept per interval; 0 keeps all edges.
  std::size_t max_positives = 2000;
  SvdOptions svd;
};

struct LinkPredictionResult {
  std::vector<double> aucs;
  double mean = 0.0;
  /// Half-width of a normal-approximation 90% interval: 1.645·sd/√reps.
  double ci90 = 0.0;
};

LinkPredictionResult summarize_aucs(std::vector<double> aucs);

/// Embeds once, trains on pairs from intervals 0..T−3 (labelled by the next
/// interval) and tests on pairs from interval T−2 (labelled by T−1). Each
/// repetition redraws the samples with a derived seed.
LinkPredictionResult link_prediction_experiment(const DynamicAttributedNetwork& network,
                                                std::size_t d, double alpha,
                                                const LinkPredictionOptions& opts = {});

/// Same protocol on precomputed embeddings.
LinkPredictionResult link_prediction_on_embedding(const EmbeddingSequence& emb,
                                                  const DynamicAttributedNetwork& network,
                                                  const LinkPredictionOptions& opts = {});

/// Node labels per interval, node-major (n×T); negative values mark unlabelled nodes.
struct NodeLabels {
  std::size_t n = 0;
  std::size_t T = 0;
  std::vector<int> values;

  int at(std::size_t node, std::size_t t) const { return values[node * T + t]; }
};

/// Rows of the labelled nodes of the given intervals.
LabeledDataset node_dataset(const EmbeddingSequence& emb, const NodeLabels& labels,
                            std::span<const std::size_t> intervals);

struct ClassificationOptions {
  std::size_t k = 15;
  double train_fraction = 0.65;
  SvdOptions svd;
  bool degree_correct = false;
};

struct ClassificationResult {
  ClassificationMetrics model;
  ClassificationMetrics baseline;  // most common training label
};

/// kNN on a temporal split of a precomputed embedding.
ClassificationResult classify_nodes(const EmbeddingSequence& emb, const NodeLabels& labels,
                                    const ClassificationOptions& opts = {});

/// Embeds with the given α and runs classify_nodes.
ClassificationResult node_classification_experiment(const DynamicAttributedNetwork& network,
                                                    const NodeLabels& labels, std::size_t d,
                                                    double alpha,
                                                    const ClassificationOptions& opts = {});

struct AlphaScore {
  double alpha = 0.0;
  double accuracy = 0.0;
};

struct AlphaSelection {
  double best_alpha = 0.0;
  std::vector<AlphaScore> scores;
};

/// For each α: embed, take the training intervals of the temporal split, hold
/// out the last 10% of them (at least one) for validation and score kNN
/// accuracy there. Returns the argmax, ties to the smaller α.
AlphaSelection cross_validate_alpha(const DynamicAttributedNetwork& network,
                                    const NodeLabels& labels, std::span<const double> alpha_grid,
                                    std::size_t d, const ClassificationOptions& opts = {});

/// Lloyd's algorithm with k-means++ seeding; best of `restarts` by inertia.
struct KMeansResult {
  std::vector<int> labels;
  DenseMatrix centers;
  double inertia = 0.0;
};
KMeansResult kmeans(const DenseMatrix& points, std::size_t k, std::uint64_t seed,
                    std::size_t restarts = 10, std::size_t max_iterations = 300);

/// Adjusted Rand index. Defined as 1 when both labelings put everything in
/// one cluster (or every point in its own cluster).
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

}  // namespace auase
