#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "auase/embedding.hpp"
#include "auase/eval.hpp"
#include "auase/matrix.hpp"
#include "auase/network.hpp"

namespace auase {

/// Paths matching a shell pattern, sorted. Throws ValidationError when nothing matches.
std::vector<std::string> expand_glob(const std::string& pattern);

/// Edge list: whitespace-separated `i j [weight]`, 0-indexed, `#` comments.
/// Edges are symmetrized, self-loops dropped, repeated lines collapse to one
/// edge (conflicting weights are an error).
SparseMatrix read_edge_list(std::istream& in, std::size_t n);
void write_edge_list(std::ostream& out, const SparseMatrix& adjacency);

/// Covariate CSV: one header line, then one row of p values per node.
DenseMatrix read_covariate_csv(std::istream& in);
void write_covariate_csv(std::ostream& out, const DenseMatrix& covariates);

/// Builds a network from per-interval files. n is the covariate row count.
DynamicAttributedNetwork ingest(const std::vector<std::string>& edge_files,
                                const std::vector<std::string>& covariate_files);

/// "t03"-style suffix, zero-padded to at least two digits and to the width of T−1.
std::string interval_tag(std::size_t t, std::size_t T);

struct Artifact {
  std::string path;  // relative to the output directory
  std::size_t rows = 0;
  std::size_t cols = 0;
};

/// Writes edges_tXX.txt and covariates_tXX.csv.
std::vector<Artifact> write_network(const std::filesystem::path& dir,
                                    const DynamicAttributedNetwork& network);

/// CSV `node,dim_0,…` per interval (embedding_tXX.csv, or prefix_tXX.csv) plus
/// singular_values.csv.
std::vector<Artifact> write_embedding(const std::filesystem::path& dir,
                                      const EmbeddingSequence& emb,
                                      const std::string& prefix = "embedding");
void write_embedding_csv(std::ostream& out, const DenseMatrix& block);
DenseMatrix read_embedding_csv(std::istream& in);

/// Node labels CSV `node,t_0,…` with one column per interval; -1 marks unlabelled.
NodeLabels read_labels_csv(std::istream& in);
void write_labels_csv(std::ostream& out, const NodeLabels& labels);

/// Rows of `experiment,interval,metric,value`; interval is empty for global metrics.
class MetricsTable {
 public:
  void add(const std::string& experiment, const std::string& interval, const std::string& metric,
           double value);
  void write(std::ostream& out) const;
  std::size_t size() const { return rows_.size(); }

 private:
  struct Row {
    std::string experiment;
    std::string interval;
    std::string metric;
    double value;
  };
  std::vector<Row> rows_;
};

/// Run manifest. The parameter block is CLI config text (INI) so a run can
/// be replayed with `--manifest`; metadata and artifacts follow in their
/// own sections.
struct Manifest {
  std::string parameters;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<Artifact> artifacts;
};
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

/// Shortest round-trip decimal form.
std::string format_real(double v);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace auase
