#include "auase/stability.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include <json.hpp>

#include "auase/error.hpp"
#include "auase/random.hpp"

namespace auase {

ProcrustesResult procrustes_align(const DenseMatrix& y, const DenseMatrix& y_ref) {
  require(y.rows() == y_ref.rows() && y.cols() == y_ref.cols(),
          "procrustes_align: shape mismatch " + std::to_string(y.rows()) + "x" +
              std::to_string(y.cols()) + " vs " + std::to_string(y_ref.rows()) + "x" +
              std::to_string(y_ref.cols()));
  require(y.cols() >= 1 && y.cols() <= 64, "procrustes_align: d must lie in [1, 64]");
  const SvdResult svd = dense_svd_oracle(matmul_tn(y, y_ref));
  ProcrustesResult out;
  out.W = matmul(svd.U, svd.V.transpose());
  out.residual = frobenius_diff(matmul(y, out.W), y_ref);
  return out;
}

double two_to_infinity(const DenseMatrix& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (double v : m.row(i)) s += v * v;
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

std::pair<double, double> fit_line(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, "fit_line: need two or more matching points");
  const double count = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0.0, "fit_line: x values are all equal");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

RateReport consistency_experiment(const ModelSpec& spec, std::span<const std::size_t> n_values,
                                  std::size_t reps, std::uint64_t seed, const RateOptions& opts) {
  spec.validate();
  require(!n_values.empty() && reps >= 1, "consistency_experiment: need n values and reps >= 1");
  for (std::size_t k = 0; k + 1 < n_values.size(); ++k)
    require(n_values[k] < n_values[k + 1], "consistency_experiment: n values must increase");

  RateReport report;
  const std::size_t T = spec.intervals();
  for (std::size_t k = 0; k < n_values.size(); ++k) {
    const std::size_t n = n_values[k];
    double total = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      const std::uint64_t rep_seed = mix_seed(mix_seed(seed, n), r);
      const LatentAssignment z = sample_assignments(spec, n, mix_seed(rep_seed, 0));
      const DynamicAttributedNetwork net = sample_network(spec, z, mix_seed(rep_seed, 1));
      const EmbeddingSequence emb = auase(net, opts.d, spec.alpha, opts.svd);
      const EmbeddingSequence ref =
          noise_free_embedding(mean_unfolded(spec, z), opts.d, T, n, spec.alpha, opts.svd);
      const DenseMatrix y = emb.stacked();
      const DenseMatrix y_ref = ref.stacked();
      const ProcrustesResult align = procrustes_align(y, y_ref);
      DenseMatrix diff = matmul(y, align.W);
      auto dd = diff.data();
      const auto rd = y_ref.data();
      for (std::size_t i = 0; i < dd.size(); ++i) dd[i] -= rd[i];
      total += two_to_infinity(diff);
    }
    report.n_values.push_back(n);
    report.errors.push_back(total / static_cast<double>(reps));
  }
  if (report.n_values.size() >= 2) {
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t k = 0; k < report.n_values.size(); ++k) {
      lx.push_back(std::log(static_cast<double>(report.n_values[k])));
      ly.push_back(std::log(report.errors[k]));
    }
    std::tie(report.slope, report.intercept) = fit_line(lx, ly);
  }
  return report;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  return 0.5 * (upper + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
}

double row_distance(const EmbeddingSequence& emb, NodeTime a, NodeTime b) {
  const auto ra = emb.blocks[a.t].row(a.node);
  const auto rb = emb.blocks[b.t].row(b.node);
  double s = 0.0;
  for (std::size_t k = 0; k < ra.size(); ++k) s += (ra[k] - rb[k]) * (ra[k] - rb[k]);
  return std::sqrt(s);
}

PairKind classify(NodeTime a, NodeTime b) {
  if (a.t == b.t) return PairKind::spatial;
  if (a.node == b.node) return PairKind::temporal;
  return PairKind::other;
}

const char* kind_name(PairKind k) {
  switch (k) {
    case PairKind::spatial:
      return "spatial";
    case PairKind::temporal:
      return "temporal";
    case PairKind::other:
      return "other";
  }
  return "other";
}

}  // namespace

double StabilityReport::median_distance() const { return median(distances); }

double StabilityReport::ratio() const {
  require(reference_scale > 0.0, "stability ratio: reference scale is zero");
  return median_distance() / reference_scale;
}

StabilityReport stability_gap(const EmbeddingSequence& emb, const LatentAssignment& z,
                              const StabilityOptions& opts) {
  require(emb.n == z.n && emb.intervals() == z.T,
          "stability_gap: embedding is " + std::to_string(emb.n) + " nodes x " +
              std::to_string(emb.intervals()) + " intervals, assignment is " +
              std::to_string(z.n) + " x " + std::to_string(z.T));
  require(opts.max_pairs >= 1, "stability_gap: max_pairs must be positive");
  const std::size_t n = z.n;
  const std::size_t T = z.T;
  int max_state = 0;
  for (int s : z.states) max_state = std::max(max_state, s);

  // Rows grouped by latent state, in (t, node) order.
  std::vector<std::vector<NodeTime>> groups(static_cast<std::size_t>(max_state) + 1);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t i = 0; i < n; ++i)
      groups[static_cast<std::size_t>(z.at(i, t))].push_back({i, t});

  StabilityReport report;
  auto add = [&](NodeTime a, NodeTime b) {
    report.pairs.emplace_back(a, b);
    report.kinds.push_back(classify(a, b));
    report.distances.push_back(row_distance(emb, a, b));
  };

  Rng rng(opts.seed);
  double exchangeable = 0.0;
  for (const auto& g : groups) {
    const double size = static_cast<double>(g.size());
    exchangeable += 0.5 * size * std::max(size - 1.0, 0.0);
  }
  if (exchangeable <= static_cast<double>(opts.max_pairs)) {
    for (const auto& g : groups)
      for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = a + 1; b < g.size(); ++b) add(g[a], g[b]);
  } else {
    while (report.pairs.size() < opts.max_pairs) {
      const std::size_t row = rng.index(n * T);
      const NodeTime a{row % n, row / n};
      const auto& g = groups[static_cast<std::size_t>(z.at(a.node, a.t))];
      if (g.size() < 2) continue;
      const NodeTime b = g[rng.index(g.size())];
      if (b.node == a.node && b.t == a.t) continue;
      add(a, b);
    }
  }

  // Reference: rows in different states at the same interval.
  double different = 0.0;
  std::vector<std::size_t> mixed;
  for (std::size_t t = 0; t < T; ++t) {
    std::vector<double> counts(groups.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) counts[static_cast<std::size_t>(z.at(i, t))] += 1.0;
    double same = 0.0;
    for (double c : counts) same += c * c;
    const double here = 0.5 * (static_cast<double>(n) * static_cast<double>(n) - same);
    if (here > 0.0) mixed.push_back(t);
    different += here;
  }
  std::vector<double> reference;
  if (different <= static_cast<double>(opts.max_pairs)) {
    for (std::size_t t : mixed)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (z.at(i, t) != z.at(j, t)) reference.push_back(row_distance(emb, {i, t}, {j, t}));
  } else {
    while (reference.size() < opts.max_pairs) {
      const std::size_t t = mixed[rng.index(mixed.size())];
      const std::size_t i = rng.index(n);
      const std::size_t j = rng.index(n);
      if (z.at(i, t) == z.at(j, t)) continue;
      reference.push_back(row_distance(emb, {i, t}, {j, t}));
    }
  }
  report.reference_scale = median(std::move(reference));
  return report;
}

EmbeddingSequence independent_embedding(const DynamicAttributedNetwork& network, std::size_t d,
                                        double alpha, const SvdOptions& opts) {
  network.validate();
  const std::size_t block_rows = network.n + network.p;
  require(d >= 1 && d <= block_rows, "independent_embedding: d out of range");
  EmbeddingSequence out;
  out.n = network.n;
  out.d = d;
  out.alpha = alpha;
  for (std::size_t t = 0; t < network.intervals(); ++t) {
    const SparseMatrix m = build_augmented(network.adjacency[t], network.covariates[t], alpha);
    const SvdResult svd = truncated_svd(m, d, opts);
    EmbeddingSequence one = embedding_from_svd(svd, 1, block_rows, network.n, alpha);
    if (t == 0) out.singular_values = one.singular_values;
    out.blocks.push_back(std::move(one.blocks.front()));
  }
  return out;
}

void write_rate_csv(std::ostream& out, const RateReport& report) {
  out << "n,error\n";
  out.precision(17);
  for (std::size_t k = 0; k < report.n_values.size(); ++k)
    out << report.n_values[k] << ',' << report.errors[k] << '\n';
}

std::string rate_summary_json(const RateReport& report) {
  nlohmann::ordered_json j;
  j["n_values"] = report.n_values;
  j["errors"] = report.errors;
  j["slope"] = report.slope;
  j["intercept"] = report.intercept;
  return j.dump(2) + "\n";
}

void write_stability_csv(std::ostream& out, const StabilityReport& report) {
  out << "node_a,t_a,node_b,t_b,kind,distance\n";
  out.precision(17);
  for (std::size_t k = 0; k < report.pairs.size(); ++k) {
    const auto& [a, b] = report.pairs[k];
    out << a.node << ',' << a.t << ',' << b.node << ',' << b.t << ',' << kind_name(report.kinds[k])
        << ',' << report.distances[k] << '\n';
  }
}

std::string stability_summary_json(const StabilityReport& report) {
  std::size_t counts[3] = {0, 0, 0};
  for (PairKind k : report.kinds) ++counts[static_cast<int>(k)];
  nlohmann::ordered_json j;
  j["pairs"] = report.pairs.size();
  j["spatial_pairs"] = counts[0];
  j["temporal_pairs"] = counts[1];
  j["other_pairs"] = counts[2];
  j["median_distance"] = report.median_distance();
  j["reference_scale"] = report.reference_scale;
  j["ratio"] = report.reference_scale > 0.0 ? report.ratio() : 0.0;
  return j.dump(2) + "\n";
}

}  // namespace auase
