#include "auase/io.hpp"

#include <glob.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "auase/error.hpp"

namespace auase {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::string where(const std::string& source, std::size_t line) {
  return source + " line " + std::to_string(line) + ": ";
}

template <class T>
T parse_number(std::string_view token, const std::string& context) {
  T value{};
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  require(ec == std::errc() && ptr == end && !token.empty(),
          context + "cannot parse '" + std::string(token) + "'");
  return value;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open '" + path + "'");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out.good()) throw ValidationError("cannot write '" + path.string() + "'");
  return out;
}

SparseMatrix read_edges_named(std::istream& in, std::size_t n, const std::string& source) {
  std::map<std::pair<std::size_t, std::size_t>, double> edges;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text(raw);
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    const auto tokens = split_ws(trim(text));
    if (tokens.empty()) continue;
    const std::string ctx = where(source, line);
    require(tokens.size() == 2 || tokens.size() == 3,
            ctx + "expected 'i j [weight]', got " + std::to_string(tokens.size()) + " fields");
    auto i = parse_number<std::size_t>(tokens[0], ctx);
    auto j = parse_number<std::size_t>(tokens[1], ctx);
    const double w = tokens.size() == 3 ? parse_number<double>(tokens[2], ctx) : 1.0;
    require(i < n && j < n, ctx + "node index out of range for n = " + std::to_string(n));
    require(std::isfinite(w), ctx + "non-finite weight");
    if (i == j || w == 0.0) continue;
    if (i > j) std::swap(i, j);
    const auto [it, inserted] = edges.emplace(std::make_pair(i, j), w);
    require(inserted || it->second == w, ctx + "edge " + std::to_string(i) + "-" +
                                             std::to_string(j) + " repeated with a different weight");
  }
  std::vector<Triplet> triplets;
  triplets.reserve(2 * edges.size());
  for (const auto& [key, w] : edges) {
    triplets.push_back({key.first, key.second, w});
    triplets.push_back({key.second, key.first, w});
  }
  return SparseMatrix::from_triplets(n, n, triplets);
}

DenseMatrix read_covariates_named(std::istream& in, const std::string& source) {
  std::string raw;
  require(static_cast<bool>(std::getline(in, raw)), source + ": missing header line");
  const std::size_t p = trim(raw).empty() ? 0 : split(trim(raw), ',').size();
  std::vector<double> data;
  std::size_t rows = 0;
  std::size_t line = 1;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty()) continue;
    const std::string ctx = where(source, line);
    const auto fields = split(text, ',');
    require(fields.size() == p, ctx + "expected " + std::to_string(p) + " values, got " +
                                    std::to_string(fields.size()));
    for (auto f : fields) {
      const double v = parse_number<double>(f, ctx);
      require(std::isfinite(v), ctx + "non-finite value");
      data.push_back(v);
    }
    ++rows;
  }
  return DenseMatrix(rows, p, std::move(data));
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<std::string> expand_glob(const std::string& pattern) {
  glob_t matches{};
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &matches);
  std::vector<std::string> out;
  if (rc == 0) {
    for (std::size_t k = 0; k < matches.gl_pathc; ++k) out.emplace_back(matches.gl_pathv[k]);
  }
  globfree(&matches);
  require(!out.empty(), "no files match '" + pattern + "'");
  std::sort(out.begin(), out.end());
  return out;
}

SparseMatrix read_edge_list(std::istream& in, std::size_t n) {
  return read_edges_named(in, n, "edge list");
}

void write_edge_list(std::ostream& out, const SparseMatrix& adjacency) {
  for (std::size_t i = 0; i < adjacency.rows(); ++i) {
    const auto row = adjacency.row(i);
    for (std::size_t k = 0; k < row.cols.size(); ++k) {
      const std::size_t j = row.cols[k];
      if (j <= i) continue;
      out << i << ' ' << j;
      if (row.values[k] != 1.0) out << ' ' << format_real(row.values[k]);
      out << '\n';
    }
  }
}

DenseMatrix read_covariate_csv(std::istream& in) { return read_covariates_named(in, "covariates"); }

void write_covariate_csv(std::ostream& out, const DenseMatrix& covariates) {
  for (std::size_t l = 0; l < covariates.cols(); ++l) out << (l ? "," : "") << "c_" << l;
  out << '\n';
  for (std::size_t i = 0; i < covariates.rows(); ++i) {
    const auto row = covariates.row(i);
    for (std::size_t l = 0; l < row.size(); ++l) out << (l ? "," : "") << format_real(row[l]);
    out << '\n';
  }
}

DynamicAttributedNetwork ingest(const std::vector<std::string>& edge_files,
                                const std::vector<std::string>& covariate_files) {
  require(!edge_files.empty(), "ingest: no edge files");
  require(edge_files.size() == covariate_files.size(),
          "ingest: " + std::to_string(edge_files.size()) + " edge files but " +
              std::to_string(covariate_files.size()) + " covariate files");
  DynamicAttributedNetwork net;
  for (std::size_t t = 0; t < covariate_files.size(); ++t) {
    auto in = open_input(covariate_files[t]);
    DenseMatrix c = read_covariates_named(in, covariate_files[t]);
    if (t == 0) {
      net.n = c.rows();
      net.p = c.cols();
    }
    require(c.rows() == net.n && c.cols() == net.p,
            covariate_files[t] + ": shape " + std::to_string(c.rows()) + "x" +
                std::to_string(c.cols()) + " differs from " + std::to_string(net.n) + "x" +
                std::to_string(net.p) + " in " + covariate_files[0]);
    net.covariates.push_back(std::move(c));
  }
  require(net.n > 0, "ingest: covariate files have no node rows");
  for (const auto& path : edge_files) {
    auto in = open_input(path);
    net.adjacency.push_back(read_edges_named(in, net.n, path));
  }
  net.validate();
  return net;
}

std::string interval_tag(std::size_t t, std::size_t T) {
  std::size_t width = 2;
  for (std::size_t v = T > 0 ? T - 1 : 0; v >= 100; v /= 10) ++width;
  std::string digits = std::to_string(t);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return "t" + digits;
}

std::vector<Artifact> write_network(const std::filesystem::path& dir,
                                    const DynamicAttributedNetwork& network) {
  std::filesystem::create_directories(dir);
  std::vector<Artifact> out;
  const std::size_t T = network.intervals();
  for (std::size_t t = 0; t < T; ++t) {
    const std::string tag = interval_tag(t, T);
    const std::string edges = "edges_" + tag + ".txt";
    const std::string covs = "covariates_" + tag + ".csv";
    {
      auto f = open_output(dir / edges);
      write_edge_list(f, network.adjacency[t]);
    }
    {
      auto f = open_output(dir / covs);
      write_covariate_csv(f, network.covariates[t]);
    }
    out.push_back({edges, network.adjacency[t].nnz() / 2, 2});
    out.push_back({covs, network.n, network.p});
  }
  return out;
}

void write_embedding_csv(std::ostream& out, const DenseMatrix& block) {
  out << "node";
  for (std::size_t k = 0; k < block.cols(); ++k) out << ",dim_" << k;
  out << '\n';
  for (std::size_t i = 0; i < block.rows(); ++i) {
    out << i;
    for (double v : block.row(i)) out << ',' << format_real(v);
    out << '\n';
  }
}

DenseMatrix read_embedding_csv(std::istream& in) {
  std::string raw;
  require(static_cast<bool>(std::getline(in, raw)), "embedding CSV: missing header");
  const auto header = split(trim(raw), ',');
  require(header.size() >= 2 && header[0] == "node", "embedding CSV: header must be node,dim_0,...");
  const std::size_t d = header.size() - 1;
  std::vector<double> data;
  std::size_t rows = 0;
  std::size_t line = 1;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty()) continue;
    const std::string ctx = where("embedding CSV", line);
    const auto fields = split(text, ',');
    require(fields.size() == d + 1, ctx + "wrong field count");
    require(parse_number<std::size_t>(fields[0], ctx) == rows, ctx + "node ids must be 0, 1, 2, ...");
    for (std::size_t k = 1; k <= d; ++k) data.push_back(parse_number<double>(fields[k], ctx));
    ++rows;
  }
  return DenseMatrix(rows, d, std::move(data));
}

std::vector<Artifact> write_embedding(const std::filesystem::path& dir,
                                      const EmbeddingSequence& emb, const std::string& prefix) {
  std::filesystem::create_directories(dir);
  std::vector<Artifact> out;
  const std::size_t T = emb.intervals();
  for (std::size_t t = 0; t < T; ++t) {
    const std::string name = prefix + "_" + interval_tag(t, T) + ".csv";
    auto f = open_output(dir / name);
    write_embedding_csv(f, emb.blocks[t]);
    out.push_back({name, emb.n, emb.d});
  }
  const std::string sv = prefix == "embedding" ? "singular_values.csv" : prefix + "_singular_values.csv";
  auto f = open_output(dir / sv);
  f << "index,value\n";
  for (std::size_t k = 0; k < emb.singular_values.size(); ++k)
    f << k << ',' << format_real(emb.singular_values[k]) << '\n';
  out.push_back({sv, emb.singular_values.size(), 1});
  return out;
}

NodeLabels read_labels_csv(std::istream& in) {
  std::string raw;
  require(static_cast<bool>(std::getline(in, raw)), "labels CSV: missing header");
  const auto header = split(trim(raw), ',');
  require(header.size() >= 2 && header[0] == "node", "labels CSV: header must be node,t_0,...");
  NodeLabels labels;
  labels.T = header.size() - 1;
  std::size_t line = 1;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty()) continue;
    const std::string ctx = where("labels CSV", line);
    const auto fields = split(text, ',');
    require(fields.size() == labels.T + 1, ctx + "wrong field count");
    require(parse_number<std::size_t>(fields[0], ctx) == labels.n,
            ctx + "node ids must be 0, 1, 2, ...");
    for (std::size_t t = 1; t <= labels.T; ++t) labels.values.push_back(parse_number<int>(fields[t], ctx));
    ++labels.n;
  }
  return labels;
}

void write_labels_csv(std::ostream& out, const NodeLabels& labels) {
  out << "node";
  for (std::size_t t = 0; t < labels.T; ++t) out << ",t_" << t;
  out << '\n';
  for (std::size_t i = 0; i < labels.n; ++i) {
    out << i;
    for (std::size_t t = 0; t < labels.T; ++t) out << ',' << labels.at(i, t);
    out << '\n';
  }
}

void MetricsTable::add(const std::string& experiment, const std::string& interval,
                       const std::string& metric, double value) {
  rows_.push_back({experiment, interval, metric, value});
}

void MetricsTable::write(std::ostream& out) const {
  out << "experiment,interval,metric,value\n";
  for (const auto& r : rows_)
    out << r.experiment << ',' << r.interval << ',' << r.metric << ',' << format_real(r.value) << '\n';
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
  auto f = open_output(path);
  f << "# auase run manifest\n";
  f << manifest.parameters;
  if (!manifest.parameters.empty() && manifest.parameters.back() != '\n') f << '\n';
  f << "[metadata]\n";
  for (const auto& [key, value] : manifest.metadata) f << key << '=' << value << '\n';
  f << "[artifacts]\n";
  for (const auto& a : manifest.artifacts)
    f << '"' << a.path << "\"=\"" << a.rows << 'x' << a.cols << "\"\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  auto f = open_output(path);
  f << text;
}

}  // namespace auase
