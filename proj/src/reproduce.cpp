#include "auase/reproduce.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "auase/error.hpp"
#include "auase/eval.hpp"
#include "auase/io.hpp"
#include "auase/random.hpp"

namespace auase {

std::vector<double> interval_ari(const EmbeddingSequence& emb, const LatentAssignment& z,
                                 std::uint64_t seed) {
  require(emb.n == z.n && emb.intervals() == z.T, "interval_ari: shape mismatch");
  std::vector<double> out;
  for (std::size_t t = 0; t < z.T; ++t) {
    const auto truth = z.interval(t);
    const std::set<int> distinct(truth.begin(), truth.end());
    const KMeansResult km = kmeans(emb.blocks[t], distinct.size(), mix_seed(seed, t));
    out.push_back(adjusted_rand_index(km.labels, truth));
  }
  return out;
}

SyntheticRun run_synthetic(const ModelSpec& spec, std::uint64_t seed,
                           const SyntheticOptions& opts) {
  SyntheticRun run;
  run.spec = spec;
  run.z = sample_assignments(spec, opts.n, mix_seed(seed, 0));
  run.network = sample_network(spec, run.z, mix_seed(seed, 1));
  SvdOptions svd = opts.svd;
  svd.seed = mix_seed(seed, 2);
  run.auase_embedding = auase(run.network, opts.d, opts.alpha, svd);
  run.uase_embedding = uase(run.network, opts.d, svd);

  const std::uint64_t cluster_seed = mix_seed(seed, 3);
  run.auase_ari = interval_ari(run.auase_embedding, run.z, cluster_seed);
  for (std::size_t t = 0; t < run.z.T; ++t) {
    std::vector<std::size_t> nodes;
    std::vector<int> truth;
    for (std::size_t i = 0; i < run.z.n; ++i) {
      const int s = run.z.at(i, t);
      if (s == 1 || s == 2) {
        nodes.push_back(i);
        truth.push_back(s);
      }
    }
    if (std::set<int>(truth.begin(), truth.end()).size() < 2) continue;
    DenseMatrix rows(nodes.size(), opts.d);
    for (std::size_t r = 0; r < nodes.size(); ++r)
      std::copy_n(run.uase_embedding.blocks[t].row(nodes[r]).begin(), opts.d, rows.row(r).begin());
    const KMeansResult km = kmeans(rows, 2, mix_seed(cluster_seed, 1000 + t));
    run.uase_ari_1_vs_2.emplace_back(t, adjusted_rand_index(km.labels, truth));
  }

  StabilityOptions stab;
  stab.max_pairs = opts.max_pairs;
  stab.seed = mix_seed(seed, 4);
  run.auase_stability = stability_gap(run.auase_embedding, run.z, stab);
  const EmbeddingSequence control = independent_embedding(run.network, opts.d, opts.alpha, svd);
  run.control_stability = stability_gap(control, run.z, stab);
  return run;
}

void write_community_means(std::ostream& out, const std::string& method,
                           const EmbeddingSequence& emb, const LatentAssignment& z) {
  std::size_t communities = 0;
  for (std::size_t c : z.trajectory) communities = std::max(communities, c + 1);
  for (std::size_t t = 0; t < emb.intervals(); ++t) {
    DenseMatrix sums(communities, emb.d);
    std::vector<std::size_t> counts(communities, 0);
    for (std::size_t i = 0; i < emb.n; ++i) {
      const std::size_t c = z.trajectory[i];
      ++counts[c];
      auto s = sums.row(c);
      const auto y = emb.blocks[t].row(i);
      for (std::size_t k = 0; k < emb.d; ++k) s[k] += y[k];
    }
    for (std::size_t c = 0; c < communities; ++c) {
      if (counts[c] == 0) continue;
      out << method << ',' << t << ',' << c;
      for (double v : sums.row(c)) out << ',' << format_real(v / static_cast<double>(counts[c]));
      out << '\n';
    }
  }
}

DenseMatrix pca_2d(const EmbeddingSequence& emb) {
  const DenseMatrix y = emb.stacked();
  require(y.rows() >= 2 && y.cols() >= 1, "pca_2d: need at least two rows");
  DenseMatrix centered = y;
  for (std::size_t k = 0; k < y.cols(); ++k) {
    double mean = 0.0;
    for (std::size_t i = 0; i < y.rows(); ++i) mean += y(i, k);
    mean /= static_cast<double>(y.rows());
    for (std::size_t i = 0; i < y.rows(); ++i) centered(i, k) -= mean;
  }
  const SvdResult axes = dense_svd_oracle(matmul_tn(centered, centered));
  const std::size_t comps = std::min<std::size_t>(2, y.cols());
  DenseMatrix out(y.rows(), 2);
  for (std::size_t i = 0; i < y.rows(); ++i) {
    for (std::size_t c = 0; c < comps; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < y.cols(); ++k) s += centered(i, k) * axes.V(k, c);
      out(i, c) = s;
    }
  }
  return out;
}

namespace {

std::ofstream create(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out.good()) throw ValidationError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

SyntheticRun reproduce_synthetic(const std::filesystem::path& out_dir, std::uint64_t seed,
                                 const SyntheticOptions& opts, const std::string& parameters) {
  const ModelSpec spec = synthetic_model_spec();
  SyntheticRun run = run_synthetic(spec, seed, opts);
  std::filesystem::create_directories(out_dir);

  Manifest manifest;
  manifest.parameters = parameters;
  auto add = [&](const std::string& sub, std::vector<Artifact> items) {
    for (auto& a : items) {
      a.path = sub + "/" + a.path;
      manifest.artifacts.push_back(std::move(a));
    }
  };
  add("network", write_network(out_dir / "network", run.network));
  add("auase", write_embedding(out_dir / "auase", run.auase_embedding));
  add("uase", write_embedding(out_dir / "uase", run.uase_embedding));

  write_text_file(out_dir / "model.cfg", format_model_spec(spec));
  manifest.artifacts.push_back({"model.cfg", spec.communities(), spec.covariates()});
  {
    auto f = create(out_dir / "assignment.csv");
    write_assignment_csv(f, run.z);
    manifest.artifacts.push_back({"assignment.csv", run.z.n, run.z.T + 2});
  }
  std::size_t mean_rows = 0;
  {
    std::ostringstream body;
    write_community_means(body, "auase", run.auase_embedding, run.z);
    write_community_means(body, "uase", run.uase_embedding, run.z);
    const std::string text = body.str();
    for (char c : text) mean_rows += c == '\n' ? 1 : 0;
    auto f = create(out_dir / "community_means.csv");
    f << "method,t,community";
    for (std::size_t k = 0; k < opts.d; ++k) f << ",dim_" << k;
    f << '\n' << text;
    manifest.artifacts.push_back({"community_means.csv", mean_rows, 3 + opts.d});
  }
  {
    auto f = create(out_dir / "pca_2d.csv");
    f << "method,t,node,community,pc_0,pc_1\n";
    for (const auto& [name, emb] : {std::pair<const char*, const EmbeddingSequence*>{
                                        "auase", &run.auase_embedding},
                                    {"uase", &run.uase_embedding}}) {
      const DenseMatrix proj = pca_2d(*emb);
      for (std::size_t t = 0; t < emb->intervals(); ++t)
        for (std::size_t i = 0; i < emb->n; ++i) {
          const std::size_t r = t * emb->n + i;
          f << name << ',' << t << ',' << i << ',' << run.z.trajectory[i] << ','
            << format_real(proj(r, 0)) << ',' << format_real(proj(r, 1)) << '\n';
        }
    }
    manifest.artifacts.push_back({"pca_2d.csv", 2 * run.z.T * run.z.n, 6});
  }

  MetricsTable metrics;
  for (std::size_t t = 0; t < run.auase_ari.size(); ++t)
    metrics.add("auase_kmeans", std::to_string(t), "ari", run.auase_ari[t]);
  for (const auto& [t, ari] : run.uase_ari_1_vs_2)
    metrics.add("uase_states_1_vs_2", std::to_string(t), "ari", ari);
  metrics.add("auase_stability", "", "ratio", run.auase_stability.ratio());
  metrics.add("control_stability", "", "ratio", run.control_stability.ratio());
  {
    auto f = create(out_dir / "metrics.csv");
    metrics.write(f);
    manifest.artifacts.push_back({"metrics.csv", metrics.size(), 4});
  }
  {
    auto f = create(out_dir / "stability_pairs.csv");
    write_stability_csv(f, run.auase_stability);
    manifest.artifacts.push_back({"stability_pairs.csv", run.auase_stability.pairs.size(), 6});
  }
  {
    nlohmann::ordered_json j;
    j["auase"] = nlohmann::ordered_json::parse(stability_summary_json(run.auase_stability));
    j["independent_control"] =
        nlohmann::ordered_json::parse(stability_summary_json(run.control_stability));
    write_text_file(out_dir / "stability.json", j.dump(2) + "\n");
    manifest.artifacts.push_back({"stability.json", 1, 1});
  }

  manifest.metadata = {
      {"command", "reproduce-synthetic"},
      {"n", std::to_string(run.network.n)},
      {"p", std::to_string(run.network.p)},
      {"T", std::to_string(run.network.intervals())},
      {"d", std::to_string(opts.d)},
      {"alpha", format_real(opts.alpha)},
      {"seed", std::to_string(seed)},
      {"degree_corrected", "false"},
  };
  write_manifest(out_dir / "manifest.ini", manifest);
  return run;
}

}  // namespace auase
