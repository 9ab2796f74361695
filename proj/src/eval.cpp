#include "auase/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <unordered_set>

#include "auase/error.hpp"
#include "auase/random.hpp"

namespace auase {

void LabeledDataset::validate() const {
  require(features.rows() == labels.size(),
          "LabeledDataset: " + std::to_string(features.rows()) + " feature rows but " +
              std::to_string(labels.size()) + " labels");
  require(groups.empty() || groups.size() == labels.size(),
          "LabeledDataset: group count does not match label count");
  for (int l : labels) require(l >= 0, "LabeledDataset: labels must be nonnegative");
}

TemporalSplit temporal_split(std::size_t T, double train_fraction) {
  require(train_fraction > 0.0 && train_fraction < 1.0,
          "temporal_split: fraction must lie in (0, 1)");
  require(T >= 1, "temporal_split: no intervals");
  const auto train = static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(T)));
  require(train < T, "temporal_split: empty test set (T = " + std::to_string(T) +
                         ", fraction = " + std::to_string(train_fraction) + ")");
  TemporalSplit split;
  for (std::size_t t = 0; t < T; ++t) (t < train ? split.train : split.test).push_back(t);
  return split;
}

namespace {

// Indices of the k nearest training rows, nearest first; distance ties go to the lower index.
void nearest(const DenseMatrix& train, std::span<const double> x, std::size_t k,
             std::vector<std::pair<double, std::size_t>>& scratch) {
  scratch.resize(train.rows());
  for (std::size_t r = 0; r < train.rows(); ++r) {
    const auto row = train.row(r);
    double s = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) s += (row[c] - x[c]) * (row[c] - x[c]);
    scratch[r] = {s, r};
  }
  std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k),
                    scratch.end());
}

void check_knn(const LabeledDataset& train, const DenseMatrix& test, std::size_t k) {
  train.validate();
  require(train.labels.size() > 0, "knn: empty training set");
  require(k >= 1 && k <= train.labels.size(),
          "knn: k = " + std::to_string(k) + " must lie in [1, " +
              std::to_string(train.labels.size()) + "]");
  require(test.rows() == 0 || test.cols() == train.features.cols(),
          "knn: test features have " + std::to_string(test.cols()) + " columns, expected " +
              std::to_string(train.features.cols()));
}

}  // namespace

std::vector<int> knn_classify(const LabeledDataset& train, const DenseMatrix& test_features,
                              std::size_t k) {
  check_knn(train, test_features, k);
  const int classes = *std::max_element(train.labels.begin(), train.labels.end()) + 1;
  std::vector<int> out(test_features.rows());
  std::vector<std::pair<double, std::size_t>> scratch;
  std::vector<std::size_t> votes(static_cast<std::size_t>(classes));
  for (std::size_t r = 0; r < test_features.rows(); ++r) {
    nearest(train.features, test_features.row(r), k, scratch);
    std::fill(votes.begin(), votes.end(), 0);
    for (std::size_t m = 0; m < k; ++m) ++votes[static_cast<std::size_t>(train.labels[scratch[m].second])];
    out[r] = static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
  }
  return out;
}

std::vector<double> knn_scores(const LabeledDataset& train, const DenseMatrix& test_features,
                               std::size_t k, int positive) {
  check_knn(train, test_features, k);
  std::vector<double> out(test_features.rows());
  std::vector<std::pair<double, std::size_t>> scratch;
  for (std::size_t r = 0; r < test_features.rows(); ++r) {
    nearest(train.features, test_features.row(r), k, scratch);
    std::size_t hits = 0;
    for (std::size_t m = 0; m < k; ++m) hits += train.labels[scratch[m].second] == positive ? 1 : 0;
    out[r] = static_cast<double>(hits) / static_cast<double>(k);
  }
  return out;
}

std::vector<int> most_common_label(std::span<const int> train_labels, std::size_t test_count) {
  require(!train_labels.empty(), "most_common_label: empty training labels");
  std::map<int, std::size_t> counts;
  for (int l : train_labels) ++counts[l];
  int best = counts.begin()->first;
  std::size_t best_count = 0;
  for (const auto& [label, count] : counts) {
    if (count > best_count) {
      best = label;
      best_count = count;
    }
  }
  return std::vector<int>(test_count, best);
}

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
  require(predicted.size() == truth.size(), "accuracy: length mismatch");
  require(!truth.empty(), "accuracy: empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

ClassificationMetrics f1_scores(std::span<const int> predicted, std::span<const int> truth) {
  ClassificationMetrics m;
  m.accuracy = accuracy(predicted, truth);
  std::map<int, std::size_t> tp;
  std::map<int, std::size_t> fp;
  std::map<int, std::size_t> support;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++support[truth[i]];
    if (predicted[i] == truth[i]) {
      ++tp[truth[i]];
    } else {
      ++fp[predicted[i]];
    }
  }
  // Single-label data: every miss is one false positive and one false negative.
  m.micro_f1 = m.accuracy;
  double macro = 0.0;
  double weighted = 0.0;
  for (const auto& [label, count] : support) {
    const double t = static_cast<double>(tp[label]);
    const double f_pos = static_cast<double>(fp[label]);
    const double f_neg = static_cast<double>(count) - t;
    const double denom = 2.0 * t + f_pos + f_neg;
    const double f1 = denom > 0.0 ? 2.0 * t / denom : 0.0;
    macro += f1;
    weighted += f1 * static_cast<double>(count);
  }
  m.macro_f1 = macro / static_cast<double>(support.size());
  m.weighted_f1 = weighted / static_cast<double>(truth.size());
  return m;
}

LinkSample link_samples(const EmbeddingSequence& emb, const DynamicAttributedNetwork& network,
                        std::size_t t, std::uint64_t seed, std::size_t max_positives) {
  require(t + 1 < network.intervals(),
          "link_samples: t = " + std::to_string(t) + " needs interval t+1 < T = " +
              std::to_string(network.intervals()));
  require(emb.intervals() == network.intervals() && emb.n == network.n,
          "link_samples: embedding does not match network");
  const SparseMatrix& next = network.adjacency[t + 1];
  const std::size_t n = network.n;

  std::vector<NodePair> positives;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = next.row(i);
    for (auto j : row.cols)
      if (j > i) positives.push_back({i, j, t});
  }
  require(!positives.empty(), "link_samples: interval " + std::to_string(t + 1) + " has no edges");
  Rng rng(seed);
  if (max_positives > 0 && positives.size() > max_positives) {
    for (std::size_t k = 0; k < max_positives; ++k) {
      const std::size_t pick = k + rng.index(positives.size() - k);
      std::swap(positives[k], positives[pick]);
    }
    positives.resize(max_positives);
  }

  const double all_pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  const double non_edges = all_pairs - 0.5 * static_cast<double>(next.nnz());
  const std::size_t wanted = positives.size();
  require(non_edges >= static_cast<double>(wanted),
          "link_samples: interval " + std::to_string(t + 1) + " is too dense to balance (" +
              std::to_string(wanted) + " edges, " + std::to_string(static_cast<std::size_t>(non_edges)) +
              " non-edges)");

  std::vector<NodePair> negatives;
  std::unordered_set<std::uint64_t> seen;
  const std::size_t budget = 100 * wanted;
  std::size_t attempts = 0;
  while (negatives.size() < wanted) {
    require(attempts < budget, "link_samples: negative sampling exceeded " +
                                   std::to_string(budget) + " attempts");
    ++attempts;
    std::size_t i = rng.index(n);
    std::size_t j = rng.index(n);
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    if (next.at(i, j) != 0.0) continue;
    if (!seen.insert(static_cast<std::uint64_t>(i) * n + j).second) continue;
    negatives.push_back({i, j, t});
  }

  LinkSample out;
  const std::size_t d = emb.d;
  out.features = DenseMatrix(2 * wanted, 2 * d);
  const DenseMatrix& y = emb.blocks[t];
  auto put = [&](std::size_t r, const NodePair& pr, int label) {
    auto dst = out.features.row(r);
    std::copy_n(y.row(pr.i).begin(), d, dst.begin());
    std::copy_n(y.row(pr.j).begin(), d, dst.begin() + static_cast<std::ptrdiff_t>(d));
    out.pairs.push_back(pr);
    out.labels.push_back(label);
  };
  for (std::size_t k = 0; k < wanted; ++k) put(k, positives[k], 1);
  for (std::size_t k = 0; k < wanted; ++k) put(wanted + k, negatives[k], 0);
  return out;
}

double auc_roc(std::span<const double> scores, std::span<const int> labels) {
  require(scores.size() == labels.size(), "auc_roc: length mismatch");
  std::size_t pos = 0;
  for (int l : labels) {
    require(l == 0 || l == 1, "auc_roc: labels must be 0 or 1");
    pos += static_cast<std::size_t>(l);
  }
  const std::size_t neg = labels.size() - pos;
  require(pos > 0 && neg > 0, "auc_roc: both classes must be present");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Sum of positive ranks, with tied groups sharing their average rank (ranks are 1-based).
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    std::size_t group_pos = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      group_pos += static_cast<std::size_t>(labels[order[j]]);
      ++j;
    }
    const double average_rank = 0.5 * static_cast<double>(i + 1 + j);
    rank_sum += average_rank * static_cast<double>(group_pos);
    i = j;
  }
  const double p = static_cast<double>(pos);
  const double u = rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(neg));
}

LinkPredictionResult summarize_aucs(std::vector<double> aucs) {
  require(!aucs.empty(), "summarize_aucs: no values");
  LinkPredictionResult out;
  const double count = static_cast<double>(aucs.size());
  out.mean = std::accumulate(aucs.begin(), aucs.end(), 0.0) / count;
  if (aucs.size() > 1) {
    double ss = 0.0;
    for (double a : aucs) ss += (a - out.mean) * (a - out.mean);
    out.ci90 = 1.645 * std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
  }
  out.aucs = std::move(aucs);
  return out;
}

LinkPredictionResult link_prediction_on_embedding(const EmbeddingSequence& emb,
                                                  const DynamicAttributedNetwork& network,
                                                  const LinkPredictionOptions& opts) {
  const std::size_t T = network.intervals();
  require(T >= 3, "link prediction needs T >= 3, got " + std::to_string(T));
  require(opts.reps >= 1, "link prediction: reps must be positive");
  std::vector<double> aucs;
  for (std::size_t r = 0; r < opts.reps; ++r) {
    const std::uint64_t rep_seed = mix_seed(opts.seed, r);
    std::vector<LinkSample> parts;
    std::size_t rows = 0;
    for (std::size_t t = 0; t + 2 < T; ++t) {
      parts.push_back(link_samples(emb, network, t, mix_seed(rep_seed, t), opts.max_positives));
      rows += parts.back().labels.size();
    }
    LabeledDataset train;
    train.features = DenseMatrix(rows, 2 * emb.d);
    std::size_t offset = 0;
    for (const auto& part : parts) {
      std::copy(part.features.data().begin(), part.features.data().end(),
                train.features.data().begin() + static_cast<std::ptrdiff_t>(offset));
      offset += part.features.size();
      train.labels.insert(train.labels.end(), part.labels.begin(), part.labels.end());
      for (const auto& pr : part.pairs) train.groups.push_back(pr.t);
    }
    const LinkSample test =
        link_samples(emb, network, T - 2, mix_seed(rep_seed, T - 2), opts.max_positives);
    const auto scores = knn_scores(train, test.features, opts.k, 1);
    aucs.push_back(auc_roc(scores, test.labels));
  }
  return summarize_aucs(std::move(aucs));
}

LinkPredictionResult link_prediction_experiment(const DynamicAttributedNetwork& network,
                                                std::size_t d, double alpha,
                                                const LinkPredictionOptions& opts) {
  const EmbeddingSequence emb = auase(network, d, alpha, opts.svd);
  return link_prediction_on_embedding(emb, network, opts);
}

LabeledDataset node_dataset(const EmbeddingSequence& emb, const NodeLabels& labels,
                            std::span<const std::size_t> intervals) {
  require(labels.n == emb.n && labels.T == emb.intervals(),
          "node_dataset: labels do not match embedding shape");
  std::vector<std::pair<std::size_t, std::size_t>> rows;
  for (std::size_t t : intervals) {
    require(t < labels.T, "node_dataset: interval out of range");
    for (std::size_t i = 0; i < labels.n; ++i)
      if (labels.at(i, t) >= 0) rows.emplace_back(i, t);
  }
  LabeledDataset out;
  out.features = DenseMatrix(rows.size(), emb.d);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto [i, t] = rows[r];
    std::copy_n(emb.blocks[t].row(i).begin(), emb.d, out.features.row(r).begin());
    out.labels.push_back(labels.at(i, t));
    out.groups.push_back(t);
  }
  return out;
}

namespace {

ClassificationResult fit_and_score(const EmbeddingSequence& emb, const NodeLabels& labels,
                                   std::span<const std::size_t> train_intervals,
                                   std::span<const std::size_t> test_intervals, std::size_t k) {
  const LabeledDataset train = node_dataset(emb, labels, train_intervals);
  const LabeledDataset test = node_dataset(emb, labels, test_intervals);
  require(!train.labels.empty(), "classification: no labelled training rows");
  require(!test.labels.empty(), "classification: no labelled test rows");
  ClassificationResult out;
  out.model = f1_scores(knn_classify(train, test.features, k), test.labels);
  out.baseline = f1_scores(most_common_label(train.labels, test.labels.size()), test.labels);
  return out;
}

}  // namespace

ClassificationResult classify_nodes(const EmbeddingSequence& emb, const NodeLabels& labels,
                                    const ClassificationOptions& opts) {
  const TemporalSplit split = temporal_split(emb.intervals(), opts.train_fraction);
  return fit_and_score(emb, labels, split.train, split.test, opts.k);
}

ClassificationResult node_classification_experiment(const DynamicAttributedNetwork& network,
                                                    const NodeLabels& labels, std::size_t d,
                                                    double alpha,
                                                    const ClassificationOptions& opts) {
  EmbeddingSequence emb = auase(network, d, alpha, opts.svd);
  if (opts.degree_correct) emb = degree_correct(emb);
  return classify_nodes(emb, labels, opts);
}

AlphaSelection cross_validate_alpha(const DynamicAttributedNetwork& network,
                                    const NodeLabels& labels, std::span<const double> alpha_grid,
                                    std::size_t d, const ClassificationOptions& opts) {
  require(!alpha_grid.empty(), "cross_validate_alpha: empty alpha grid");
  const TemporalSplit split = temporal_split(network.intervals(), opts.train_fraction);
  const std::size_t held = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(split.train.size()))));
  require(held < split.train.size(),
          "cross_validate_alpha: need at least two training intervals");
  const std::span<const std::size_t> fit(split.train.data(), split.train.size() - held);
  const std::span<const std::size_t> validation(split.train.data() + fit.size(), held);

  AlphaSelection out;
  double best_accuracy = -1.0;
  for (double alpha : alpha_grid) {
    EmbeddingSequence emb = auase(network, d, alpha, opts.svd);
    if (opts.degree_correct) emb = degree_correct(emb);
    const double acc = fit_and_score(emb, labels, fit, validation, opts.k).model.accuracy;
    out.scores.push_back({alpha, acc});
    if (acc > best_accuracy || (acc == best_accuracy && alpha < out.best_alpha)) {
      best_accuracy = acc;
      out.best_alpha = alpha;
    }
  }
  return out;
}

}  // namespace auase
