// auase command-line tool.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "auase/embedding.hpp"
#include "auase/error.hpp"
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

struct Settings {
  std::string out;
  std::uint64_t seed = 1;
  double alpha = 0.2;
  std::size_t dim = 3;
  std::size_t intervals = 0;
  std::size_t n = 1000;
  std::string model;
  std::string builtin;
  std::string edges;
  std::string covariates;
  std::string labels;
  bool degree_correct = false;
  bool standardize = false;
  std::size_t svd_power_iters = 4;
  std::size_t svd_oversample = 10;
  std::size_t svd_max_iters = 1000;
  double svd_tol = 1e-10;
  std::vector<std::size_t> n_values{200, 400, 800, 1600};
  std::size_t reps = 5;
  std::size_t max_pairs = 10000;
  std::string task = "all";
  std::vector<double> alpha_grid;
  std::size_t k = 15;
  double train_fraction = 0.65;
  std::size_t max_positives = 2000;

  SvdOptions svd() const {
    SvdOptions o;
    o.power_iterations = svd_power_iters;
    o.oversampling = svd_oversample;
    o.max_iterations = svd_max_iters;
    o.tolerance = svd_tol;
    o.seed = mix_seed(seed, 0x5d);
    return o;
  }
};

void add_out(CLI::App* sub, Settings& s) {
  sub->add_option("--out", s.out, "Output directory")->required()->configurable(false);
}

void add_seed(CLI::App* sub, Settings& s) { sub->add_option("--seed", s.seed, "PRNG seed"); }

void add_svd(CLI::App* sub, Settings& s) {
  sub->add_option("--svd-power-iters", s.svd_power_iters, "Minimum subspace iterations");
  sub->add_option("--svd-oversample", s.svd_oversample, "Extra basis vectors");
  sub->add_option("--svd-max-iters", s.svd_max_iters, "Iteration budget");
  sub->add_option("--svd-tol", s.svd_tol, "Relative stopping tolerance");
}

void add_model(CLI::App* sub, Settings& s, const std::string& builtin) {
  s.builtin = builtin;
  sub->add_option("--model", s.model, "Model config file (overrides --builtin)");
  sub->add_option("--builtin", s.builtin, "Built-in model")
      ->check(CLI::IsMember({"synthetic", "rate-check"}));
  sub->add_option("--intervals", s.intervals, "Keep the first T intervals (0 keeps all)");
}

void add_network_inputs(CLI::App* sub, Settings& s) {
  sub->add_option("--edges", s.edges, "Glob of per-interval edge lists")->required();
  sub->add_option("--covariates", s.covariates, "Glob of per-interval covariate CSVs")->required();
  sub->add_option("--intervals", s.intervals, "Use the first T intervals (0 uses all)");
}

ModelSpec load_model(const Settings& s, bool override_alpha) {
  ModelSpec spec;
  if (!s.model.empty()) {
    spec = load_model_spec(s.model);
  } else if (s.builtin == "rate-check") {
    spec = rate_check_model_spec();
  } else {
    spec = synthetic_model_spec();
  }
  if (s.intervals != 0) {
    require(s.intervals <= spec.intervals(),
            "--intervals " + std::to_string(s.intervals) + " exceeds the model's " +
                std::to_string(spec.intervals()) + " intervals");
    for (auto& traj : spec.trajectories) traj.states.resize(s.intervals);
  }
  if (override_alpha) spec.alpha = s.alpha;
  spec.validate();
  return spec;
}

DynamicAttributedNetwork load_network(const Settings& s) {
  auto edges = expand_glob(s.edges);
  auto covs = expand_glob(s.covariates);
  require(edges.size() == covs.size(), "--edges matched " + std::to_string(edges.size()) +
                                           " files but --covariates matched " +
                                           std::to_string(covs.size()));
  if (s.intervals != 0) {
    require(s.intervals <= edges.size(), "--intervals " + std::to_string(s.intervals) +
                                             " exceeds the " + std::to_string(edges.size()) +
                                             " matched intervals");
    edges.resize(s.intervals);
    covs.resize(s.intervals);
  }
  return ingest(edges, covs);
}

// The active subcommand's options as an INI section, replayable with --manifest.
std::string parameter_block(const CLI::App* sub) {
  return "[" + sub->get_name() + "]\n" + sub->config_to_str(true, false);
}

using Metadata = std::vector<std::pair<std::string, std::string>>;

Metadata metadata(const std::string& command, std::size_t n, std::size_t p, std::size_t T,
                  std::size_t d, double alpha, std::uint64_t seed, bool degree_corrected) {
  return {{"command", command},
          {"n", std::to_string(n)},
          {"p", std::to_string(p)},
          {"T", std::to_string(T)},
          {"d", std::to_string(d)},
          {"alpha", format_real(alpha)},
          {"seed", std::to_string(seed)},
          {"degree_corrected", degree_corrected ? "true" : "false"}};
}

std::ofstream create(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write " + path.string());
  return f;
}

int run_simulate(const CLI::App* sub, const Settings& s) {
  const ModelSpec spec = load_model(s, true);
  const LatentAssignment z = sample_assignments(spec, s.n, mix_seed(s.seed, 0));
  const DynamicAttributedNetwork net = sample_network(spec, z, mix_seed(s.seed, 1));
  const fs::path out(s.out);
  fs::create_directories(out);

  Manifest m;
  m.parameters = parameter_block(sub);
  m.metadata = metadata("simulate", net.n, net.p, net.intervals(), 0, spec.alpha, s.seed, false);
  for (auto a : write_network(out / "network", net)) {
    a.path = "network/" + a.path;
    m.artifacts.push_back(a);
  }
  write_text_file(out / "model.cfg", format_model_spec(spec));
  m.artifacts.push_back({"model.cfg", spec.communities(), spec.covariates()});
  {
    auto f = create(out / "assignment.csv");
    write_assignment_csv(f, z);
  }
  m.artifacts.push_back({"assignment.csv", z.n, z.T + 2});
  {
    auto f = create(out / "labels.csv");
    write_labels_csv(f, NodeLabels{z.n, z.T, z.states});
  }
  m.artifacts.push_back({"labels.csv", z.n, z.T + 1});
  write_manifest(out / "manifest.ini", m);
  std::cout << "simulated n=" << net.n << " p=" << net.p << " T=" << net.intervals() << " into "
            << out.string() << '\n';
  return 0;
}

int run_embed(const CLI::App* sub, const Settings& s) {
  DynamicAttributedNetwork net = load_network(s);
  if (s.standardize) net = standardize_covariates(net);
  const SvdOptions svd_opts = s.svd();
  EmbeddingSequence emb;
  if (s.dim == 0) {
    const std::size_t d_max = default_max_dimension(net.n, net.p);
    const SvdResult wide = truncated_svd(unfold(net, s.alpha), d_max, svd_opts);
    const std::size_t d = select_dimension(wide.S);
    SvdResult cut;
    cut.U = wide.U.col_block(0, d);
    cut.V = wide.V.col_block(0, d);
    cut.S.assign(wide.S.begin(), wide.S.begin() + static_cast<std::ptrdiff_t>(d));
    emb = embedding_from_svd(cut, net.intervals(), net.n + net.p, net.n, s.alpha);
    std::cout << "selected d=" << d << " from " << d_max << " singular values\n";
  } else {
    emb = auase::auase(net, s.dim, s.alpha, svd_opts);
  }
  if (s.degree_correct) emb = degree_correct(emb);

  const fs::path out(s.out);
  fs::create_directories(out);
  Manifest m;
  m.parameters = parameter_block(sub);
  m.metadata = metadata("embed", net.n, net.p, net.intervals(), emb.d, s.alpha, s.seed,
                        s.degree_correct);
  m.artifacts = write_embedding(out, emb);
  write_manifest(out / "manifest.ini", m);
  std::cout << "embedded n=" << net.n << " T=" << net.intervals() << " d=" << emb.d << " into "
            << out.string() << '\n';
  return 0;
}

int run_rate_check(const CLI::App* sub, const Settings& s) {
  const ModelSpec spec = load_model(s, true);
  RateOptions opts;
  opts.d = s.dim;
  opts.svd = s.svd();
  const RateReport report = consistency_experiment(spec, s.n_values, s.reps, s.seed, opts);

  const fs::path out(s.out);
  fs::create_directories(out);
  Manifest m;
  m.parameters = parameter_block(sub);
  m.metadata = metadata("rate-check", s.n_values.back(), spec.covariates(), spec.intervals(),
                        s.dim, spec.alpha, s.seed, false);
  {
    auto f = create(out / "rate.csv");
    write_rate_csv(f, report);
  }
  m.artifacts.push_back({"rate.csv", report.n_values.size(), 2});
  write_text_file(out / "rate.json", rate_summary_json(report));
  m.artifacts.push_back({"rate.json", 1, 1});
  write_manifest(out / "manifest.ini", m);
  for (std::size_t k = 0; k < report.n_values.size(); ++k)
    std::cout << "n=" << report.n_values[k] << " error=" << format_real(report.errors[k]) << '\n';
  std::cout << "slope=" << format_real(report.slope) << '\n';
  return 0;
}

int run_stability_check(const CLI::App* sub, const Settings& s) {
  const ModelSpec spec = load_model(s, true);
  const LatentAssignment z = sample_assignments(spec, s.n, mix_seed(s.seed, 0));
  const DynamicAttributedNetwork net = sample_network(spec, z, mix_seed(s.seed, 1));
  const EmbeddingSequence emb = auase::auase(net, s.dim, spec.alpha, s.svd());
  const EmbeddingSequence control = independent_embedding(net, s.dim, spec.alpha, s.svd());
  StabilityOptions opts;
  opts.max_pairs = s.max_pairs;
  opts.seed = mix_seed(s.seed, 4);
  const StabilityReport report = stability_gap(emb, z, opts);
  const StabilityReport control_report = stability_gap(control, z, opts);

  const fs::path out(s.out);
  fs::create_directories(out);
  Manifest m;
  m.parameters = parameter_block(sub);
  m.metadata = metadata("stability-check", net.n, net.p, net.intervals(), s.dim, spec.alpha,
                        s.seed, false);
  {
    auto f = create(out / "stability_pairs.csv");
    write_stability_csv(f, report);
  }
  m.artifacts.push_back({"stability_pairs.csv", report.pairs.size(), 6});
  nlohmann::ordered_json j;
  j["auase"] = nlohmann::ordered_json::parse(stability_summary_json(report));
  j["independent_control"] = nlohmann::ordered_json::parse(stability_summary_json(control_report));
  write_text_file(out / "stability.json", j.dump(2) + "\n");
  m.artifacts.push_back({"stability.json", 1, 1});
  write_manifest(out / "manifest.ini", m);
  std::cout << "auase ratio=" << format_real(report.ratio())
            << " control ratio=" << format_real(control_report.ratio()) << '\n';
  return 0;
}

int run_evaluate(const CLI::App* sub, const Settings& s) {
  const bool want_link = s.task == "link" || s.task == "all";
  const bool want_class = s.task == "classify" || s.task == "all";
  require(!want_class || !s.labels.empty(), "--task " + s.task + " needs --labels");
  DynamicAttributedNetwork net = load_network(s);
  if (s.standardize) net = standardize_covariates(net);
  NodeLabels labels;
  if (want_class) {
    std::ifstream in(s.labels);
    require(static_cast<bool>(in), "cannot open " + s.labels);
    labels = read_labels_csv(in);
    require(labels.n == net.n && labels.T >= net.intervals(),
            "labels are " + std::to_string(labels.n) + "x" + std::to_string(labels.T) +
                ", network is " + std::to_string(net.n) + "x" + std::to_string(net.intervals()));
    if (labels.T > net.intervals()) {
      NodeLabels cut{labels.n, net.intervals(), {}};
      for (std::size_t i = 0; i < labels.n; ++i)
        for (std::size_t t = 0; t < net.intervals(); ++t) cut.values.push_back(labels.at(i, t));
      labels = cut;
    }
  }

  ClassificationOptions copts;
  copts.k = s.k;
  copts.train_fraction = s.train_fraction;
  copts.svd = s.svd();
  copts.degree_correct = s.degree_correct;

  MetricsTable metrics;
  double alpha = s.alpha;
  if (want_class && !s.alpha_grid.empty()) {
    const AlphaSelection sel = cross_validate_alpha(net, labels, s.alpha_grid, s.dim, copts);
    for (const auto& score : sel.scores)
      metrics.add("alpha_cv", "", "accuracy@" + format_real(score.alpha), score.accuracy);
    alpha = sel.best_alpha;
    metrics.add("alpha_cv", "", "best_alpha", alpha);
  }

  EmbeddingSequence emb = auase::auase(net, s.dim, alpha, copts.svd);
  if (s.degree_correct) emb = degree_correct(emb);

  if (want_class) {
    const ClassificationResult r = classify_nodes(emb, labels, copts);
    for (const auto& [name, m] : {std::pair<const char*, const ClassificationMetrics*>{"knn", &r.model},
                                  {"most_common_label", &r.baseline}}) {
      const std::string exp = std::string("classification_") + name;
      metrics.add(exp, "", "accuracy", m->accuracy);
      metrics.add(exp, "", "micro_f1", m->micro_f1);
      metrics.add(exp, "", "macro_f1", m->macro_f1);
      metrics.add(exp, "", "weighted_f1", m->weighted_f1);
    }
    std::cout << "classification accuracy=" << format_real(r.model.accuracy)
              << " baseline=" << format_real(r.baseline.accuracy) << '\n';
  }
  if (want_link) {
    LinkPredictionOptions lopts;
    lopts.k = s.k;
    lopts.reps = s.reps;
    lopts.seed = mix_seed(s.seed, 7);
    lopts.max_positives = s.max_positives;
    lopts.svd = copts.svd;
    const LinkPredictionResult r = link_prediction_on_embedding(emb, net, lopts);
    for (std::size_t k = 0; k < r.aucs.size(); ++k)
      metrics.add("link_prediction", std::to_string(net.intervals() - 2), "auc_rep" + std::to_string(k),
                  r.aucs[k]);
    metrics.add("link_prediction", std::to_string(net.intervals() - 2), "auc_mean", r.mean);
    metrics.add("link_prediction", std::to_string(net.intervals() - 2), "auc_ci90", r.ci90);
    std::cout << "link prediction auc=" << format_real(r.mean) << " +/- " << format_real(r.ci90)
              << '\n';
  }

  const fs::path out(s.out);
  fs::create_directories(out);
  Manifest m;
  m.parameters = parameter_block(sub);
  m.metadata = metadata("evaluate", net.n, net.p, net.intervals(), s.dim, alpha, s.seed,
                        s.degree_correct);
  {
    auto f = create(out / "metrics.csv");
    metrics.write(f);
  }
  m.artifacts.push_back({"metrics.csv", metrics.size(), 4});
  write_manifest(out / "manifest.ini", m);
  return 0;
}

int run_reproduce(const CLI::App* sub, const Settings& s) {
  SyntheticOptions opts;
  opts.n = s.n;
  opts.d = s.dim;
  opts.alpha = s.alpha;
  opts.max_pairs = s.max_pairs;
  opts.svd = s.svd();
  const SyntheticRun run = reproduce_synthetic(s.out, s.seed, opts, parameter_block(sub));
  double worst = 1.0;
  for (double a : run.auase_ari) worst = std::min(worst, a);
  double uase_best = -1.0;
  for (const auto& [t, a] : run.uase_ari_1_vs_2) uase_best = std::max(uase_best, a);
  std::cout << "auase min interval ARI=" << format_real(worst) << '\n'
            << "uase max states-1-vs-2 ARI=" << format_real(uase_best) << '\n'
            << "stability ratio auase=" << format_real(run.auase_stability.ratio())
            << " control=" << format_real(run.control_stability.ratio()) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attributed unfolded adjacency spectral embedding for dynamic networks"};
  app.option_defaults()->always_capture_default();
  app.set_config("--manifest", "", "Replay parameters from a run manifest")->configurable(false);
  app.allow_config_extras(CLI::config_extras_mode::ignore);
  app.require_subcommand(1);

  Settings s;

  auto* simulate = app.add_subcommand("simulate", "Sample a dynamic attributed network");
  add_model(simulate, s, "synthetic");
  simulate->add_option("--n", s.n, "Number of nodes");
  simulate->add_option("--alpha", s.alpha, "Mixing weight recorded in model.cfg");
  add_seed(simulate, s);
  add_out(simulate, s);

  auto* embed = app.add_subcommand("embed", "Embed a network from edge and covariate files");
  add_network_inputs(embed, s);
  embed->add_option("--alpha", s.alpha, "Covariate weight in [0, 1]");
  embed->add_option("--dim", s.dim, "Embedding dimension (0 selects it from the scree)");
  embed->add_flag("--degree-correct", s.degree_correct, "Project rows onto the unit sphere");
  embed->add_flag("--standardize", s.standardize, "Standardize covariate columns first");
  add_seed(embed, s);
  add_svd(embed, s);
  add_out(embed, s);

  auto* rate = app.add_subcommand("rate-check", "Measure the two-to-infinity error rate in n");
  add_model(rate, s, "rate-check");
  rate->add_option("--n-values", s.n_values, "Increasing node counts")->delimiter(',');
  rate->add_option("--reps", s.reps, "Repetitions per n");
  rate->add_option("--alpha", s.alpha, "Covariate weight");
  rate->add_option("--dim", s.dim, "Embedding dimension");
  add_seed(rate, s);
  add_svd(rate, s);
  add_out(rate, s);

  auto* stab = app.add_subcommand("stability-check", "Compare exchangeable-pair distances");
  add_model(stab, s, "synthetic");
  stab->add_option("--n", s.n, "Number of nodes");
  stab->add_option("--alpha", s.alpha, "Covariate weight");
  stab->add_option("--dim", s.dim, "Embedding dimension");
  stab->add_option("--max-pairs", s.max_pairs, "Pair budget");
  add_seed(stab, s);
  add_svd(stab, s);
  add_out(stab, s);

  auto* eval = app.add_subcommand("evaluate", "Node classification and link prediction");
  add_network_inputs(eval, s);
  eval->add_option("--labels", s.labels, "Node labels CSV (node,t_0,...)");
  eval->add_option("--task", s.task, "Which experiments to run")
      ->check(CLI::IsMember({"all", "link", "classify"}));
  eval->add_option("--alpha", s.alpha, "Covariate weight");
  eval->add_option("--alpha-grid", s.alpha_grid, "Candidate alphas for validation")->delimiter(',');
  eval->add_option("--dim", s.dim, "Embedding dimension");
  eval->add_option("--k", s.k, "Neighbours for kNN");
  eval->add_option("--reps", s.reps, "Link prediction repetitions");
  eval->add_option("--train-fraction", s.train_fraction, "Leading share of intervals used for training");
  eval->add_option("--max-positives", s.max_positives, "Positive pairs per interval (0 keeps all)");
  eval->add_flag("--degree-correct", s.degree_correct, "Project rows onto the unit sphere");
  eval->add_flag("--standardize", s.standardize, "Standardize covariate columns first");
  add_seed(eval, s);
  add_svd(eval, s);
  add_out(eval, s);

  auto* repro = app.add_subcommand("reproduce-synthetic", "Run the built-in synthetic experiment");
  repro->add_option("--n", s.n, "Number of nodes");
  repro->add_option("--alpha", s.alpha, "Covariate weight for AUASE");
  repro->add_option("--dim", s.dim, "Embedding dimension");
  repro->add_option("--max-pairs", s.max_pairs, "Pair budget");
  add_seed(repro, s);
  add_svd(repro, s);
  add_out(repro, s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) return run_simulate(simulate, s);
    if (embed->parsed()) return run_embed(embed, s);
    if (rate->parsed()) return run_rate_check(rate, s);
    if (stab->parsed()) return run_stability_check(stab, s);
    if (eval->parsed()) return run_evaluate(eval, s);
    if (repro->parsed()) return run_reproduce(repro, s);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
