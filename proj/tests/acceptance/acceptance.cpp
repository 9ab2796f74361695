// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "auase/embedding.hpp"
#include "auase/eval.hpp"
#include "auase/io.hpp"
#include "auase/model.hpp"
#include "auase/random.hpp"
#include "auase/reproduce.hpp"
#include "auase/stability.hpp"
#include "auase/svd.hpp"

namespace fs = std::filesystem;
using namespace auase;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

// Criterion 1: randomized SVD against the Jacobi oracle.
Outcome svd_oracle_equivalence() {
  Rng rng(mix_seed(kSeed, 1));
  double worst_sigma = 0.0;
  double worst_subspace = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t rows = 10 + rng.index(191);
    const std::size_t cols = 10 + rng.index(191);
    const double density = 0.02 + 0.28 * rng.uniform();
    std::vector<Triplet> ts;
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (rng.uniform() < density) ts.push_back({i, j, 2.0 * rng.uniform() - 1.0});
    const SparseMatrix m = SparseMatrix::from_triplets(rows, cols, ts);
    const std::size_t d = 1 + rng.index(std::min<std::size_t>(10, std::min(rows, cols)));
    SvdOptions opts;
    opts.seed = mix_seed(kSeed, 100 + static_cast<std::uint64_t>(trial));
    const SvdResult fast = truncated_svd(m, d, opts);
    const SvdResult full = dense_svd_oracle(m.to_dense());
    for (std::size_t k = 0; k < d; ++k)
      worst_sigma = std::max(worst_sigma, std::abs(fast.S[k] - full.S[k]) / full.S[k]);
    worst_subspace = std::max(worst_subspace, procrustes_align(fast.U, full.U.col_block(0, d)).residual);
    worst_subspace = std::max(worst_subspace, procrustes_align(fast.V, full.V.col_block(0, d)).residual);
  }
  return {worst_sigma <= 1e-6 && worst_subspace <= 1e-6,
          "100 matrices, max sigma rel err " + fmt(worst_sigma) + ", max subspace residual " +
              fmt(worst_subspace)};
}

// Criterion 2: exchangeable rows of the noise-free embedding coincide.
Outcome noise_free_exactness() {
  const ModelSpec spec = synthetic_model_spec();
  const std::size_t n = 300;
  const LatentAssignment z = sample_assignments(spec, n, mix_seed(kSeed, 2));
  const EmbeddingSequence emb =
      noise_free_embedding(mean_unfolded(spec, z), 3, spec.intervals(), n, spec.alpha);
  double spatial = 0.0;
  double temporal = 0.0;
  std::size_t spatial_pairs = 0;
  std::size_t temporal_pairs = 0;
  auto dist = [&](std::size_t i, std::size_t s, std::size_t j, std::size_t t) {
    double m = 0.0;
    for (std::size_t k = 0; k < 3; ++k) m = std::max(m, std::abs(emb.blocks[s](i, k) - emb.blocks[t](j, k)));
    return m;
  };
  for (std::size_t t = 0; t < z.T; ++t)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (z.at(i, t) == z.at(j, t)) {
          spatial = std::max(spatial, dist(i, t, j, t));
          ++spatial_pairs;
        }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t s = 0; s < z.T; ++s)
      for (std::size_t t = s + 1; t < z.T; ++t)
        if (z.at(i, s) == z.at(i, t)) {
          temporal = std::max(temporal, dist(i, s, i, t));
          ++temporal_pairs;
        }
  return {spatial <= 1e-10 && temporal <= 1e-10 && spatial_pairs > 0 && temporal_pairs > 0,
          std::to_string(spatial_pairs) + " spatial pairs max " + fmt(spatial) + ", " +
              std::to_string(temporal_pairs) + " temporal pairs max " + fmt(temporal)};
}

// Criterion 3: two-to-infinity error rate in n.
Outcome consistency_rate() {
  const ModelSpec spec = rate_check_model_spec();
  const std::vector<std::size_t> ns{200, 400, 800, 1600};
  const RateReport r = consistency_experiment(spec, ns, 5, mix_seed(kSeed, 3));
  bool decreasing = true;
  for (std::size_t k = 1; k < r.errors.size(); ++k) decreasing = decreasing && r.errors[k] < r.errors[k - 1];
  std::string errs;
  for (double e : r.errors) errs += (errs.empty() ? "" : ", ") + fmt(e);
  return {decreasing && r.slope >= -0.65 && r.slope <= -0.35,
          "T=" + std::to_string(spec.intervals()) + ", errors [" + errs + "], slope " + fmt(r.slope)};
}

// Criterion 4: synthetic reproduction. The run is reused by criterion 5.
Outcome synthetic_reproduction(const SyntheticRun& run) {
  const double min_ari = *std::min_element(run.auase_ari.begin(), run.auase_ari.end());
  double max_uase = -1.0;
  for (const auto& [t, a] : run.uase_ari_1_vs_2) max_uase = std::max(max_uase, a);
  const double ratio = run.auase_stability.ratio();
  const double control = run.control_stability.ratio();
  const bool a = min_ari >= 0.9;
  const bool b = !run.uase_ari_1_vs_2.empty() && max_uase <= 0.2;
  const bool c = ratio <= 0.25 && control > 0.25;
  return {a && b && c, std::string("(a) min AUASE ARI ") + fmt(min_ari) + (a ? " ok" : " FAIL") +
                           "; (b) max UASE states-1-vs-2 ARI " + fmt(max_uase) + " over " +
                           std::to_string(run.uase_ari_1_vs_2.size()) + " intervals" +
                           (b ? " ok" : " FAIL") + "; (c) stability ratio " + fmt(ratio) +
                           ", control " + fmt(control) + (c ? " ok" : " FAIL")};
}

// Criterion 5: classification across α against the majority baseline, and
// α = 0 on labels that only the covariates separate.
Outcome alpha_robustness(const SyntheticRun& run) {
  const LatentAssignment& z = run.z;
  NodeLabels states{z.n, z.T, z.states};
  // States 1 and 2 share edge probabilities; only their covariate means differ.
  NodeLabels covariate_only{z.n, z.T, z.states};
  for (int& v : covariate_only.values)
    if (v == 0) v = -1;

  ClassificationOptions copts;
  SvdOptions svd;
  svd.seed = mix_seed(kSeed, 2);
  bool all_beat_baseline = true;
  bool zero_is_worse = true;
  const ClassificationResult zero_cov = classify_nodes(run.uase_embedding, covariate_only, copts);
  std::string sweep;
  for (int step = 1; step <= 9; ++step) {
    const double alpha = 0.1 * step;
    const EmbeddingSequence emb = auase::auase(run.network, 3, alpha, svd);
    const ClassificationResult r = classify_nodes(emb, states, copts);
    const ClassificationResult cov = classify_nodes(emb, covariate_only, copts);
    all_beat_baseline = all_beat_baseline && r.model.accuracy > r.baseline.accuracy;
    zero_is_worse = zero_is_worse && zero_cov.model.accuracy < cov.model.accuracy;
    sweep += (sweep.empty() ? "" : " ") + fmt(alpha, 2) + ":" + fmt(r.model.accuracy, 3) + "/" +
             fmt(cov.model.accuracy, 3);
    if (step == 1)
      sweep = "baseline " + fmt(r.baseline.accuracy, 3) + "; alpha:states/covariate-only " + sweep;
  }
  return {all_beat_baseline && zero_is_worse,
          sweep + "; alpha 0 covariate-only " + fmt(zero_cov.model.accuracy, 3)};
}

// Criterion 6: AUC against the all-pairs definition, exact equality.
Outcome auc_exactness() {
  Rng rng(mix_seed(kSeed, 6));
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 2 + rng.index(49);
    std::vector<double> s(m);
    std::vector<int> y(m);
    bool both = false;
    while (!both) {
      for (std::size_t i = 0; i < m; ++i) {
        // Half the sets use a coarse grid so that ties are frequent.
        s[i] = trial % 2 == 0 ? static_cast<double>(rng.index(6)) : rng.normal();
        y[i] = static_cast<int>(rng.index(2));
      }
      const auto pos = std::count(y.begin(), y.end(), 1);
      both = pos > 0 && pos < static_cast<long>(m);
    }
    double wins = 0.0;
    double pairs = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (y[i] == 1 && y[j] == 0) {
          pairs += 1.0;
          wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
        }
    if (auc_roc(s, y) != wins / pairs) ++mismatches;
  }
  return {mismatches == 0, "1000 sets, " + std::to_string(mismatches) + " mismatches"};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream body;
    body << in.rdbuf();
    out[fs::relative(e.path(), dir).string()] = body.str();
  }
  return out;
}

// Criterion 7: the real-data tables need external datasets and learners, so
// they are replaced by property checks.
Outcome property_suite(const SyntheticRun& run) {
  const ModelSpec spec = synthetic_model_spec();
  const LatentAssignment z = sample_assignments(spec, 150, mix_seed(kSeed, 7));
  const DynamicAttributedNetwork net = sample_network(spec, z, mix_seed(kSeed, 8));
  std::vector<std::size_t> perm(net.n);
  for (std::size_t i = 0; i < net.n; ++i) perm[i] = (i * 61 + 17) % net.n;
  std::vector<std::size_t> inverse(net.n);
  for (std::size_t i = 0; i < net.n; ++i) inverse[perm[i]] = i;
  DynamicAttributedNetwork shuffled = net;
  for (std::size_t t = 0; t < net.intervals(); ++t) {
    std::vector<Triplet> ts;
    for (const auto& e : net.adjacency[t].to_triplets()) ts.push_back({inverse[e.row], inverse[e.col], e.value});
    shuffled.adjacency[t] = SparseMatrix::from_triplets(net.n, net.n, ts);
    for (std::size_t i = 0; i < net.n; ++i)
      for (std::size_t l = 0; l < net.p; ++l) shuffled.covariates[t](i, l) = net.covariates[t](perm[i], l);
  }
  const DenseMatrix a = auase::auase(net, 3, 0.2).stacked();
  const DenseMatrix b = auase::auase(shuffled, 3, 0.2).stacked();
  DenseMatrix permuted(a.rows(), a.cols());
  for (std::size_t t = 0; t < net.intervals(); ++t)
    for (std::size_t i = 0; i < net.n; ++i)
      for (std::size_t k = 0; k < 3; ++k) permuted(t * net.n + i, k) = a(t * net.n + perm[i], k);
  const double equivariance = procrustes_align(b, permuted).residual;

  // WᵀW − I over alignments of real embeddings and random pairs.
  double orthogonality = 0.0;
  auto check_w = [&](const DenseMatrix& w) {
    const DenseMatrix g = matmul_tn(w, w);
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j)
        orthogonality = std::max(orthogonality, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
  };
  check_w(procrustes_align(run.uase_embedding.stacked(), run.auase_embedding.stacked()).W);
  check_w(procrustes_align(b, permuted).W);
  Rng rng(mix_seed(kSeed, 9));
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + rng.index(8);
    DenseMatrix x(50, d), y(50, d);
    for (double& v : x.data()) v = rng.normal();
    for (double& v : y.data()) v = rng.normal();
    check_w(procrustes_align(x, y).W);
  }

  const fs::path root = fs::temp_directory_path() / ("auase_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  SyntheticOptions opts;
  opts.n = 120;
  opts.max_pairs = 2000;
  reproduce_synthetic(root / "first", mix_seed(kSeed, 10), opts, "[reproduce-synthetic]\nn=120\n");
  reproduce_synthetic(root / "second", mix_seed(kSeed, 10), opts, "[reproduce-synthetic]\nn=120\n");
  const auto first = snapshot(root / "first");
  const bool identical = first == snapshot(root / "second");
  fs::remove_all(root);

  return {equivariance <= 1e-6 && orthogonality <= 1e-10 && identical,
          "real-data tables not reproducible here (external datasets and learners); "
          "permutation residual " + fmt(equivariance) + ", max |WtW - I| " + fmt(orthogonality) +
              ", rerun of " + std::to_string(first.size()) + " files " +
              (identical ? "byte-identical" : "DIFFERS")};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const std::string& name, double limit_seconds,
                    const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < limit_seconds;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << " " << name << ": " << o.detail
              << " [" << fmt(secs, 3) << " s" << (in_time ? "" : ", over the time limit") << "]"
              << std::endl;
  };

  std::cout << "seed " << kSeed << std::endl;
  report(1, "svd-oracle-equivalence", 60, svd_oracle_equivalence);
  report(2, "noise-free-exactness", 60, noise_free_exactness);
  report(3, "consistency-rate", 600, consistency_rate);

  SyntheticRun run;
  bool have_run = false;
  report(4, "synthetic-reproduction", 300, [&] {
    run = run_synthetic(synthetic_model_spec(), kSeed);
    have_run = true;
    return synthetic_reproduction(run);
  });
  report(5, "alpha-robustness", 600, [&] {
    if (!have_run) return Outcome{false, "synthetic run unavailable"};
    return alpha_robustness(run);
  });
  report(6, "auc-exactness", 60, auc_exactness);
  report(7, "property-substitutes", 300, [&] {
    if (!have_run) return Outcome{false, "synthetic run unavailable"};
    return property_suite(run);
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
