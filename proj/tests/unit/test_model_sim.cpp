#include <doctest.h>

#include <cmath>
#include <iostream>
#include <sstream>

#include "auase/error.hpp"
#include "auase/model.hpp"
#include "oracles.hpp"

using namespace auase;

namespace {

ModelSpec one_community(double b, double m, double alpha, std::size_t T = 1) {
  ModelSpec spec;
  spec.B = DenseMatrix(1, 1, b);
  spec.D = DenseMatrix(1, 1, m);
  spec.alpha = alpha;
  spec.trajectories = {{std::vector<int>(T, 0), 1.0}};
  return spec;
}

std::vector<int> constant_labels(std::size_t n, int label) { return std::vector<int>(n, label); }

}  // namespace

TEST_CASE("sample_assignments") {
  ModelSpec spec = one_community(0.5, 1.0, 0.2, 4);
  const auto z = sample_assignments(spec, 10, 1);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t t = 0; t < 4; ++t) CHECK(z.at(i, t) == 0);

  const ModelSpec syn = synthetic_model_spec();
  const auto big = sample_assignments(syn, 3000, 7);
  std::vector<int> counts(3, 0);
  for (std::size_t c : big.trajectory) ++counts[c];
  // 4σ binomial bound: σ = √(3000·⅓·⅔) ≈ 25.8.
  for (int c : counts) CHECK(std::abs(c - 1000) <= 200);
  for (std::size_t i = 0; i < big.n; ++i)
    for (std::size_t t = 0; t < big.T; ++t)
      CHECK(big.at(i, t) == syn.trajectories[big.trajectory[i]].states[t]);

  const auto again = sample_assignments(syn, 3000, 7);
  CHECK(again.states == big.states);
}

TEST_CASE("sample_adjacency extremes and density") {
  ModelSpec full = one_community(1.0, 0.0, 0.2);
  const auto a = sample_adjacency(full, constant_labels(6, 0), 1);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) CHECK(a.at(i, j) == (i == j ? 0.0 : 1.0));

  ModelSpec empty = one_community(0.0, 0.0, 0.2);
  CHECK(sample_adjacency(empty, constant_labels(6, 0), 1).nnz() == 0);

  ModelSpec half = one_community(0.5, 0.0, 0.2);
  const std::size_t n = 1000;
  const auto g = sample_adjacency(half, constant_labels(n, 0), 3);
  const double pairs = n * (n - 1) / 2.0;
  const double density = 0.5 * static_cast<double>(g.nnz()) / pairs;
  CHECK(std::abs(density - 0.5) <= 0.01);
  CHECK(g.is_symmetric());
  for (std::size_t i = 0; i < n; ++i) CHECK(g.at(i, i) == 0.0);

  CHECK_THROWS_AS(sample_adjacency(half, constant_labels(3, 1), 1), ValidationError);
}

TEST_CASE("sample_covariates") {
  ModelSpec spec = synthetic_model_spec();
  spec.sigma = 0.0;
  const std::vector<int> labels{0, 2, 1, 2};
  const auto c = sample_covariates(spec, labels, 5);
  CHECK(c.rows() == 4);
  CHECK(c.cols() == 150);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t l = 0; l < 150; ++l) CHECK(c(i, l) == spec.D(static_cast<std::size_t>(labels[i]), l));

  ModelSpec noisy = one_community(0.5, 2.5, 0.2);
  noisy.D = DenseMatrix(1, 3, std::vector<double>{2.5, -1.0, 0.0});
  const std::size_t n = 5000;
  const auto x = sample_covariates(noisy, constant_labels(n, 0), 9);
  for (std::size_t l = 0; l < 3; ++l) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x(i, l);
    CHECK(std::abs(mean / n - noisy.D(0, l)) <= 0.06);
  }
  CHECK_THROWS_AS(sample_covariates(noisy, std::vector<int>{-1}, 1), ValidationError);
}

TEST_CASE("build_augmented") {
  const std::vector<Triplet> edge{{0, 1, 1.0}, {1, 0, 1.0}};
  const auto a = SparseMatrix::from_triplets(2, 2, edge);
  const DenseMatrix c(2, 1, std::vector<double>{2.0, 3.0});

  const auto half = build_augmented(a, c, 0.5).to_dense();
  CHECK(half == DenseMatrix(3, 3, std::vector<double>{0, 0.5, 1, 0.5, 0, 1.5, 1, 1.5, 0}));

  const auto zero = build_augmented(a, c, 0.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(zero.at(i, j) == (i < 2 && j < 2 ? a.at(i, j) : 0.0));

  const auto one = build_augmented(a, c, 1.0);
  CHECK(one.at(0, 1) == 0.0);
  CHECK(one.at(0, 2) == 2.0);
  CHECK(one.at(2, 1) == 3.0);

  CHECK_THROWS_AS(build_augmented(a, c, 1.5), ValidationError);
  CHECK_THROWS_AS(build_augmented(a, DenseMatrix(3, 1), 0.5), ValidationError);
}

TEST_CASE("build_augmented is exactly symmetric") {
  const ModelSpec spec = synthetic_model_spec();
  const auto z = sample_assignments(spec, 80, 2);
  const auto net = sample_network(spec, z, 3);
  for (double alpha : {0.0, 0.2, 0.7, 1.0}) {
    const auto m = build_augmented(net.adjacency[0], net.covariates[0], alpha);
    for (const auto& t : m.to_triplets()) CHECK(m.at(t.col, t.row) == t.value);
  }
}

TEST_CASE("mean_augmented entries") {
  ModelSpec spec = one_community(0.4, 3.0, 0.5);
  LatentAssignment z;
  z.n = 4;
  z.T = 1;
  z.states.assign(4, 0);
  z.trajectory.assign(4, 0);
  const auto mean = mean_augmented(spec, z).front();
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j) CHECK(mean.at(i, j) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(mean.at(i, 4) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(mean.at(4, i) == doctest::Approx(1.5).epsilon(1e-15));
  }
  CHECK(mean.at(4, 4) == 0.0);

  spec.alpha = 0.0;
  const auto plain = mean_augmented(spec, z).front();
  for (std::size_t i = 0; i < 5; ++i) CHECK(plain.at(i, 4) == 0.0);

  // ρ scales the network block linearly and the covariate block by √ρ.
  spec.alpha = 0.5;
  spec.rho = 0.25;
  const auto sparse = mean_augmented(spec, z).front();
  CHECK(sparse.at(0, 1) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(sparse.at(0, 4) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("empirical adjacency mean converges to the mean matrix") {
  ModelSpec spec = synthetic_model_spec();
  const std::size_t n = 20;
  const auto z = sample_assignments(spec, n, 11);
  const auto mean = mean_augmented(spec, z).front();
  oracle::Dense sum = oracle::zeros(n, n);
  const std::size_t draws = 200;
  const auto labels = z.interval(0);
  for (std::size_t r = 0; r < draws; ++r) {
    const auto a = sample_adjacency(spec, labels, 1000 + r);
    for (const auto& t : a.to_triplets()) sum[t.row][t.col] += t.value;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double p = mean.at(i, j) / (1.0 - spec.alpha);
      const double se = std::sqrt(p * (1.0 - p) / draws);
      CHECK(std::abs(sum[i][j] / draws - p) <= 4.0 * se);
    }
}

TEST_CASE("rank of the synthetic mean matrix") {
  // Rows and columns of P_C come in groups of identical vectors (nodes sharing a
  // trajectory, covariates sharing a D column), so its singular values are
  // those of the small group matrix with each entry weighted by √(row count ·
  // column count). The group matrix is built here from the model description.
  const ModelSpec spec = synthetic_model_spec();
  const std::size_t n = 300;
  const auto z = sample_assignments(spec, n, 21);
  const std::size_t T = spec.intervals();
  const std::size_t p = spec.covariates();

  std::vector<double> traj_count(3, 0.0);
  for (std::size_t c : z.trajectory) traj_count[c] += 1.0;
  // Covariate groups: columns equal to μ-indicator of state 0/1 (20..74) or state 2 (80..139).
  const std::vector<double> cov_count{55.0, 60.0};
  auto d_group = [](std::size_t state, std::size_t g) {
    return (g == 0 && state <= 1) || (g == 1 && state == 2) ? 1.0 : 0.0;
  };
  const double a = spec.alpha;
  DenseMatrix group(5, T * 5);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t r = 0; r < 3; ++r) {
      const auto sr = static_cast<std::size_t>(spec.trajectories[r].states[t]);
      for (std::size_t c = 0; c < 3; ++c) {
        const auto sc = static_cast<std::size_t>(spec.trajectories[c].states[t]);
        group(r, t * 5 + c) = (1 - a) * spec.B(sr, sc) * std::sqrt(traj_count[r] * traj_count[c]);
      }
      for (std::size_t g = 0; g < 2; ++g) {
        group(r, t * 5 + 3 + g) = a * d_group(sr, g) * std::sqrt(traj_count[r] * cov_count[g]);
        group(3 + g, t * 5 + r) = a * d_group(sr, g) * std::sqrt(traj_count[r] * cov_count[g]);
      }
    }
  }
  const auto expected = dense_svd_oracle(group);
  std::size_t oracle_rank = 0;
  for (double s : expected.S) oracle_rank += s > 1e-10 * expected.S[0] ? 1 : 0;
  CHECK(oracle_rank == 5);

  const SparseMatrix pc = mean_unfolded(spec, z);
  CHECK(pc.rows() == n + p);
  CHECK(pc.cols() == T * (n + p));
  const auto svd = truncated_svd(pc, 8);
  std::size_t rank = 0;
  for (double s : svd.S) rank += s > 1e-10 * svd.S[0] ? 1 : 0;
  CHECK(rank == oracle_rank);
  for (std::size_t k = 0; k < oracle_rank; ++k)
    CHECK(std::abs(svd.S[k] - expected.S[k]) <= 1e-6 * expected.S[k]);

  // Without covariates the rank falls to rank(B) = 2.
  ModelSpec plain = spec;
  plain.alpha = 0.0;
  const auto svd0 = truncated_svd(mean_unfolded(plain, z), 4);
  std::size_t rank0 = 0;
  for (double s : svd0.S) rank0 += s > 1e-10 * svd0.S[0] ? 1 : 0;
  CHECK(rank0 == 2);

  // A rank-5 P_C is reproduced by its 5-truncated SVD.
  const auto top = truncated_svd(pc, oracle_rank);
  const DenseMatrix dense = pc.to_dense();
  CHECK(frobenius_diff(reconstruct(top), dense) <= 1e-8 * frobenius_norm(dense));
}

TEST_CASE("noise-free embedding rows of exchangeable pairs coincide") {
  const ModelSpec spec = synthetic_model_spec();
  const std::size_t n = 120;
  const auto z = sample_assignments(spec, n, 5);
  const auto emb = noise_free_embedding(mean_unfolded(spec, z), 3, spec.intervals(), n, spec.alpha);
  CHECK(emb.blocks.size() == spec.intervals());
  double worst = 0.0;
  for (std::size_t s = 0; s < z.T; ++s)
    for (std::size_t t = 0; t < z.T; ++t)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (z.at(i, s) != z.at(j, t)) continue;
          for (std::size_t k = 0; k < 3; ++k)
            worst = std::max(worst, std::abs(emb.blocks[s](i, k) - emb.blocks[t](j, k)));
        }
  CHECK(worst <= 1e-10);
}

TEST_CASE("noise-free embedding of a single community") {
  ModelSpec spec = one_community(0.3, 1.0, 0.2, 3);
  spec.D = DenseMatrix(1, 4, std::vector<double>{1, 0, 2, 0});
  const std::size_t n = 40;
  const auto z = sample_assignments(spec, n, 1);
  const auto emb = noise_free_embedding(mean_unfolded(spec, z), 1, 3, n, spec.alpha);
  for (const auto& block : emb.blocks)
    for (std::size_t i = 1; i < n; ++i) CHECK(std::abs(block(i, 0) - block(0, 0)) <= 1e-12);
}

TEST_CASE("noise-free embedding warns when d exceeds the rank") {
  ModelSpec spec = one_community(0.3, 1.0, 0.0, 2);
  const auto z = sample_assignments(spec, 10, 1);
  std::ostringstream captured;
  auto* old = std::cerr.rdbuf(captured.rdbuf());
  try {
    noise_free_embedding(mean_unfolded(spec, z), 3, 2, 10, 0.0);
  } catch (...) {
    std::cerr.rdbuf(old);
    throw;
  }
  std::cerr.rdbuf(old);
  CHECK(captured.str().find("numerical rank") != std::string::npos);
}

TEST_CASE("built-in synthetic model") {
  const ModelSpec spec = synthetic_model_spec();
  CHECK(spec.communities() == 3);
  CHECK(spec.covariates() == 150);
  CHECK(spec.intervals() == 10);
  CHECK(spec.alpha == 0.2);
  CHECK(spec.sigma == 1.0);
  CHECK(spec.rho == 1.0);
  CHECK(spec.B(0, 0) == 0.3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i + j > 0) CHECK(spec.B(i, j) == 0.5);
  for (std::size_t l = 0; l < 150; ++l) {
    const double mu1 = l >= 20 && l <= 74 ? 1.0 : 0.0;
    const double mu2 = l >= 80 && l <= 139 ? 1.0 : 0.0;
    CHECK(spec.D(0, l) == mu1);
    CHECK(spec.D(1, l) == mu1);
    CHECK(spec.D(2, l) == mu2);
  }
  // All three communities share state 1 at t = 3, 4; community 0 leaves state 1 after t = 6.
  for (std::size_t t : {3, 4})
    for (const auto& traj : spec.trajectories) CHECK(traj.states[t] == 1);
  CHECK(spec.trajectories[0].states[6] == 1);
  CHECK(spec.trajectories[0].states[7] == 0);
}

TEST_CASE("model config round trip and errors") {
  const ModelSpec spec = rate_check_model_spec();
  const ModelSpec back = parse_model_spec(format_model_spec(spec));
  CHECK(back.B == spec.B);
  CHECK(back.D == spec.D);
  CHECK(back.alpha == spec.alpha);
  REQUIRE(back.trajectories.size() == spec.trajectories.size());
  for (std::size_t k = 0; k < spec.trajectories.size(); ++k) {
    CHECK(back.trajectories[k].states == spec.trajectories[k].states);
    CHECK(back.trajectories[k].probability == spec.trajectories[k].probability);
  }

  const std::string base = "B =\n 0.5 0.1\n 0.1 0.5\nD =\n 1 0\n 0 1\n";
  CHECK_NOTHROW(parse_model_spec(base + "trajectory = 1/2 : 0 1\ntrajectory = 1/2 : 1 0\n"));
  CHECK_THROWS_AS(parse_model_spec(base + "trajectory = 0.4 : 0 1\ntrajectory = 0.4 : 1 0\n"),
                  ValidationError);
  CHECK_THROWS_AS(parse_model_spec(base + "trajectory = 1 : 0 2\n"), ValidationError);
  CHECK_THROWS_AS(parse_model_spec("B =\n 0.5 0.2\n 0.1 0.5\nD =\n 1\n 0\ntrajectory = 1 : 0\n"),
                  ValidationError);
  try {
    parse_model_spec(base + "colour = red\ntrajectory = 1 : 0 0\n");
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 7") != std::string::npos);
  }
}

TEST_CASE("assignment CSV round trip") {
  const auto z = sample_assignments(synthetic_model_spec(), 25, 3);
  std::stringstream buf;
  write_assignment_csv(buf, z);
  const auto back = read_assignment_csv(buf);
  CHECK(back.n == z.n);
  CHECK(back.T == z.T);
  CHECK(back.states == z.states);
  CHECK(back.trajectory == z.trajectory);
}

TEST_CASE("network validation") {
  const ModelSpec spec = synthetic_model_spec();
  const auto z = sample_assignments(spec, 30, 1);
  auto net = sample_network(spec, z, 2);
  CHECK_NOTHROW(net.validate());
  CHECK(net.intervals() == 10);
  auto bad = net;
  const std::vector<Triplet> loop{{0, 0, 1.0}};
  bad.adjacency[3] = SparseMatrix::from_triplets(30, 30, loop);
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = net;
  bad.covariates.pop_back();
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}
