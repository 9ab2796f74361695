#include "auase/model.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

#include "auase/error.hpp"
#include "auase/random.hpp"

namespace auase {

void DynamicAttributedNetwork::validate() const {
  require(!adjacency.empty(), "network has no intervals");
  require(covariates.size() == adjacency.size(),
          "network: " + std::to_string(adjacency.size()) + " adjacency matrices but " +
              std::to_string(covariates.size()) + " covariate matrices");
  for (std::size_t t = 0; t < adjacency.size(); ++t) {
    const auto& a = adjacency[t];
    const auto& c = covariates[t];
    const std::string where = "interval " + std::to_string(t) + ": ";
    require(a.rows() == n && a.cols() == n, where + "adjacency is not " + std::to_string(n) +
                                                "x" + std::to_string(n));
    require(c.rows() == n && c.cols() == p, where + "covariates are not " + std::to_string(n) +
                                                "x" + std::to_string(p));
    require(a.is_symmetric(), where + "adjacency is not symmetric");
    for (std::size_t i = 0; i < n; ++i) require(a.at(i, i) == 0.0, where + "nonzero diagonal");
    require(c.all_finite(), where + "non-finite covariate");
  }
}

void ModelSpec::validate() const {
  const std::size_t k = B.rows();
  require(k >= 1 && B.cols() == k, "ModelSpec: B must be square and nonempty");
  require(D.rows() == k, "ModelSpec: D must have K rows");
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      require(B(i, j) >= 0.0 && B(i, j) <= 1.0, "ModelSpec: B entries must lie in [0, 1]");
      require(std::abs(B(i, j) - B(j, i)) <= 1e-15, "ModelSpec: B must be symmetric");
    }
  }
  require(D.all_finite(), "ModelSpec: D must be finite");
  require(sigma >= 0.0 && std::isfinite(sigma), "ModelSpec: sigma must be >= 0");
  require(rho > 0.0 && rho <= 1.0, "ModelSpec: rho must lie in (0, 1]");
  require(alpha >= 0.0 && alpha <= 1.0, "ModelSpec: alpha must lie in [0, 1]");
  require(!trajectories.empty(), "ModelSpec: no trajectories");
  double total = 0.0;
  const std::size_t T = trajectories.front().states.size();
  require(T >= 1, "ModelSpec: empty trajectory");
  for (const auto& traj : trajectories) {
    require(traj.states.size() == T, "ModelSpec: trajectories differ in length");
    require(traj.probability >= 0.0, "ModelSpec: negative trajectory probability");
    for (int s : traj.states)
      require(s >= 0 && static_cast<std::size_t>(s) < k, "ModelSpec: state out of range");
    total += traj.probability;
  }
  require(std::abs(total - 1.0) <= 1e-9, "ModelSpec: trajectory probabilities sum to " +
                                             std::to_string(total) + ", expected 1");
}

std::vector<int> LatentAssignment::interval(std::size_t t) const {
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = at(i, t);
  return out;
}

LatentAssignment sample_assignments(const ModelSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  LatentAssignment z;
  z.n = n;
  z.T = spec.intervals();
  z.states.resize(n * z.T);
  z.trajectory.resize(n);
  const std::size_t last = spec.trajectories.size() - 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    double cumulative = 0.0;
    std::size_t pick = last;
    for (std::size_t k = 0; k < last; ++k) {
      cumulative += spec.trajectories[k].probability;
      if (u < cumulative) {
        pick = k;
        break;
      }
    }
    z.trajectory[i] = pick;
    std::copy(spec.trajectories[pick].states.begin(), spec.trajectories[pick].states.end(),
              z.states.begin() + static_cast<std::ptrdiff_t>(i * z.T));
  }
  return z;
}

namespace {

void check_labels(std::span<const int> labels, std::size_t k) {
  for (int s : labels)
    require(s >= 0 && static_cast<std::size_t>(s) < k,
            "label " + std::to_string(s) + " out of range for K = " + std::to_string(k));
}

}  // namespace

SparseMatrix sample_adjacency(const ModelSpec& spec, std::span<const int> labels,
                              std::uint64_t seed) {
  check_labels(labels, spec.communities());
  const std::size_t n = labels.size();
  Rng rng(seed);
  std::vector<std::vector<SparseMatrix::Index>> neighbours(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double prob = spec.rho * spec.B(static_cast<std::size_t>(labels[i]),
                                            static_cast<std::size_t>(labels[j]));
      if (rng.bernoulli(prob)) {
        neighbours[i].push_back(static_cast<SparseMatrix::Index>(j));
        neighbours[j].push_back(static_cast<SparseMatrix::Index>(i));
      }
    }
  }
  // Row j receives its i < j entries in increasing i before its own j' > j,
  // so every neighbour list is already sorted.
  std::vector<std::size_t> row_ptr(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) row_ptr[i + 1] = row_ptr[i] + neighbours[i].size();
  std::vector<SparseMatrix::Index> col_idx;
  col_idx.reserve(row_ptr.back());
  for (auto& row : neighbours) col_idx.insert(col_idx.end(), row.begin(), row.end());
  std::vector<double> values(col_idx.size(), 1.0);
  return SparseMatrix::from_csr(n, n, std::move(row_ptr), std::move(col_idx), std::move(values));
}

DenseMatrix sample_covariates(const ModelSpec& spec, std::span<const int> labels,
                              std::uint64_t seed) {
  check_labels(labels, spec.communities());
  const std::size_t n = labels.size();
  const std::size_t p = spec.covariates();
  Rng rng(seed);
  DenseMatrix out(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    const auto mean = spec.D.row(static_cast<std::size_t>(labels[i]));
    auto row = out.row(i);
    for (std::size_t l = 0; l < p; ++l) row[l] = mean[l] + spec.sigma * rng.normal();
  }
  return out;
}

DynamicAttributedNetwork sample_network(const ModelSpec& spec, const LatentAssignment& z,
                                        std::uint64_t seed) {
  spec.validate();
  require(z.T == spec.intervals(), "sample_network: assignment has wrong interval count");
  DynamicAttributedNetwork net;
  net.n = z.n;
  net.p = spec.covariates();
  for (std::size_t t = 0; t < z.T; ++t) {
    const auto labels = z.interval(t);
    net.adjacency.push_back(sample_adjacency(spec, labels, mix_seed(seed, 2 * t)));
    net.covariates.push_back(sample_covariates(spec, labels, mix_seed(seed, 2 * t + 1)));
  }
  return net;
}

SparseMatrix build_augmented(const SparseMatrix& adjacency, const DenseMatrix& covariates,
                             double alpha) {
  require(alpha >= 0.0 && alpha <= 1.0, "build_augmented: alpha must lie in [0, 1]");
  const std::size_t n = adjacency.rows();
  const std::size_t p = covariates.cols();
  require(adjacency.cols() == n, "build_augmented: adjacency must be square");
  require(covariates.rows() == n, "build_augmented: covariates must have " + std::to_string(n) +
                                      " rows, got " + std::to_string(covariates.rows()));
  const double network_weight = 1.0 - alpha;
  const std::size_t size = n + p;
  std::vector<std::size_t> row_ptr(size + 1, 0);
  std::vector<SparseMatrix::Index> col_idx;
  std::vector<double> values;
  col_idx.reserve(adjacency.nnz() + 2 * n * p);
  values.reserve(adjacency.nnz() + 2 * n * p);
  for (std::size_t i = 0; i < n; ++i) {
    const auto view = adjacency.row(i);
    for (std::size_t k = 0; k < view.cols.size(); ++k) {
      col_idx.push_back(view.cols[k]);
      values.push_back(network_weight * view.values[k]);
    }
    const auto c = covariates.row(i);
    for (std::size_t l = 0; l < p; ++l) {
      col_idx.push_back(static_cast<SparseMatrix::Index>(n + l));
      values.push_back(alpha * c[l]);
    }
    row_ptr[i + 1] = values.size();
  }
  for (std::size_t l = 0; l < p; ++l) {
    for (std::size_t i = 0; i < n; ++i) {
      col_idx.push_back(static_cast<SparseMatrix::Index>(i));
      values.push_back(alpha * covariates(i, l));
    }
    row_ptr[n + l + 1] = values.size();
  }
  return SparseMatrix::from_csr(size, size, std::move(row_ptr), std::move(col_idx),
                                std::move(values));
}

std::vector<SparseMatrix> mean_augmented(const ModelSpec& spec, const LatentAssignment& z) {
  spec.validate();
  require(z.T == spec.intervals(), "mean_augmented: assignment has wrong interval count");
  const std::size_t n = z.n;
  const std::size_t p = spec.covariates();
  const double network_weight = (1.0 - spec.alpha) * spec.rho;
  const double covariate_weight = spec.alpha * std::sqrt(spec.rho);
  std::vector<SparseMatrix> out;
  out.reserve(z.T);
  for (std::size_t t = 0; t < z.T; ++t) {
    const auto labels = z.interval(t);
    DenseMatrix mean(n + p, n + p);
    for (std::size_t i = 0; i < n; ++i) {
      const auto zi = static_cast<std::size_t>(labels[i]);
      auto row = mean.row(i);
      for (std::size_t j = 0; j < n; ++j)
        row[j] = network_weight * spec.B(zi, static_cast<std::size_t>(labels[j]));
      for (std::size_t l = 0; l < p; ++l) {
        const double v = covariate_weight * spec.D(zi, l);
        row[n + l] = v;
        mean(n + l, i) = v;
      }
    }
    out.push_back(SparseMatrix::from_dense(mean));
  }
  return out;
}

SparseMatrix mean_unfolded(const ModelSpec& spec, const LatentAssignment& z) {
  const auto blocks = mean_augmented(spec, z);
  return hconcat(blocks);
}

EmbeddingSequence noise_free_embedding(const SparseMatrix& mean, std::size_t d,
                                       std::size_t intervals, std::size_t n, double alpha,
                                       const SvdOptions& opts) {
  require(intervals >= 1 && mean.cols() % intervals == 0,
          "noise_free_embedding: column count not divisible by interval count");
  const std::size_t block_rows = mean.cols() / intervals;
  require(block_rows == mean.rows() && n <= block_rows,
          "noise_free_embedding: expected a (n+p) x T(n+p) unfolded matrix");
  const SvdResult svd = truncated_svd(mean, d, opts);
  if (svd.S.back() <= 1e-10 * svd.S.front()) {
    std::cerr << "warning: noise_free_embedding: d = " << d
              << " exceeds the numerical rank of the mean matrix\n";
  }
  return embedding_from_svd(svd, intervals, block_rows, n, alpha);
}

}  // namespace auase
