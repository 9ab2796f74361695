// Python bindings (module auase._core).

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "auase/embedding.hpp"
#include "auase/error.hpp"
#include "auase/eval.hpp"
#include "auase/model.hpp"
#include "auase/stability.hpp"
#include "auase/svd.hpp"

namespace py = pybind11;
using namespace auase;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IntArray = py::array_t<long long, py::array::c_style | py::array::forcecast>;

DenseMatrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw ValidationError("expected a 2-D array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return DenseMatrix(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

Array to_array(const DenseMatrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

// Symmetrized, self-loops and zero weights dropped; repeats collapse to one edge.
SparseMatrix edges_to_adjacency(const Array& e, std::size_t n) {
  if (e.ndim() != 2 || (e.shape(1) != 2 && e.shape(1) != 3))
    throw ValidationError("edge arrays must have shape (m, 2) or (m, 3)");
  const auto r = e.unchecked<2>();
  std::map<std::pair<std::size_t, std::size_t>, double> weights;
  for (py::ssize_t k = 0; k < e.shape(0); ++k) {
    const double fi = r(k, 0), fj = r(k, 1);
    if (fi < 0 || fj < 0 || fi >= static_cast<double>(n) || fj >= static_cast<double>(n))
      throw ValidationError("edge " + std::to_string(k) + " has a node index outside [0, n)");
    auto i = static_cast<std::size_t>(fi);
    auto j = static_cast<std::size_t>(fj);
    const double w = e.shape(1) == 3 ? r(k, 2) : 1.0;
    if (i == j || w == 0.0) continue;
    if (i > j) std::swap(i, j);
    const auto [it, fresh] = weights.emplace(std::make_pair(i, j), w);
    if (!fresh && it->second != w)
      throw ValidationError("edge " + std::to_string(k) + " repeats a pair with a different weight");
  }
  std::vector<Triplet> ts;
  for (const auto& [key, w] : weights) {
    ts.push_back({key.first, key.second, w});
    ts.push_back({key.second, key.first, w});
  }
  return SparseMatrix::from_triplets(n, n, ts);
}

DynamicAttributedNetwork to_network(const std::vector<Array>& edges,
                                    const std::vector<Array>& covariates) {
  if (edges.size() != covariates.size() || edges.empty())
    throw ValidationError("need one edge array and one covariate array per interval");
  DynamicAttributedNetwork net;
  net.n = static_cast<std::size_t>(covariates.front().shape(0));
  net.p = covariates.front().ndim() == 2 ? static_cast<std::size_t>(covariates.front().shape(1)) : 0;
  for (std::size_t t = 0; t < edges.size(); ++t) {
    net.adjacency.push_back(edges_to_adjacency(edges[t], net.n));
    net.covariates.push_back(to_matrix(covariates[t]));
  }
  net.validate();
  return net;
}

SvdOptions svd_options(std::uint64_t seed, std::size_t power_iterations, std::size_t oversampling,
                       double tolerance) {
  SvdOptions o;
  o.seed = seed;
  o.power_iterations = power_iterations;
  o.oversampling = oversampling;
  o.tolerance = tolerance;
  return o;
}

py::tuple svd_tuple(const SvdResult& r) {
  return py::make_tuple(to_array(r.U), py::array_t<double>(r.S.size(), r.S.data()), to_array(r.V));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Attributed unfolded adjacency spectral embedding";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def(
      "truncated_svd",
      [](const Array& matrix, std::size_t d, std::uint64_t seed, std::size_t power_iterations,
         std::size_t oversampling, double tolerance) {
        const SparseMatrix s = SparseMatrix::from_dense(to_matrix(matrix));
        return svd_tuple(truncated_svd(s, d, svd_options(seed, power_iterations, oversampling, tolerance)));
      },
      py::arg("matrix"), py::arg("d"), py::arg("seed") = 0, py::arg("power_iterations") = 4,
      py::arg("oversampling") = 10, py::arg("tolerance") = 1e-10,
      "Top-d singular triplets (U, S, V) by randomized subspace iteration.");

  m.def(
      "dense_svd", [](const Array& matrix) { return svd_tuple(dense_svd_oracle(to_matrix(matrix))); },
      py::arg("matrix"), "Full thin SVD by one-sided Jacobi (at most 512 rows and columns).");

  m.def(
      "simulate",
      [](std::size_t n, std::uint64_t seed, const std::string& model) {
        ModelSpec spec;
        if (model == "synthetic") {
          spec = synthetic_model_spec();
        } else if (model == "rate-check") {
          spec = rate_check_model_spec();
        } else {
          spec = load_model_spec(model);
        }
        const LatentAssignment z = sample_assignments(spec, n, seed);
        const DynamicAttributedNetwork net = sample_network(spec, z, seed + 1);
        py::list edges, covs;
        for (std::size_t t = 0; t < net.intervals(); ++t) {
          std::vector<long long> flat;
          for (const auto& e : net.adjacency[t].to_triplets())
            if (e.row < e.col) {
              flat.push_back(static_cast<long long>(e.row));
              flat.push_back(static_cast<long long>(e.col));
            }
          IntArray a({flat.size() / 2, std::size_t{2}});
          std::copy(flat.begin(), flat.end(), a.mutable_data());
          edges.append(a);
          covs.append(to_array(net.covariates[t]));
        }
        IntArray states({z.n, z.T});
        std::copy(z.states.begin(), z.states.end(), states.mutable_data());
        py::dict out;
        out["edges"] = edges;
        out["covariates"] = covs;
        out["states"] = states;
        out["alpha"] = spec.alpha;
        return out;
      },
      py::arg("n"), py::arg("seed") = 0, py::arg("model") = "synthetic",
      "Sample a network from a built-in model ('synthetic', 'rate-check') or a config file.");

  m.def(
      "embed",
      [](const std::vector<Array>& edges, const std::vector<Array>& covariates, std::size_t d,
         double alpha, std::uint64_t seed, bool degree_corrected) {
        const auto net = to_network(edges, covariates);
        EmbeddingSequence emb = auase::auase(net, d, alpha, svd_options(seed, 4, 10, 1e-10));
        if (degree_corrected) emb = degree_correct(emb);
        Array y({emb.intervals(), emb.n, emb.d});
        const DenseMatrix stacked = emb.stacked();
        std::copy(stacked.data().begin(), stacked.data().end(), y.mutable_data());
        return py::make_tuple(y, py::array_t<double>(emb.singular_values.size(),
                                                     emb.singular_values.data()));
      },
      py::arg("edges"), py::arg("covariates"), py::arg("d"), py::arg("alpha") = 0.2,
      py::arg("seed") = 0, py::arg("degree_correct") = false,
      "Embed T intervals; returns (Y of shape (T, n, d), singular values).");

  m.def(
      "select_dimension",
      [](const std::vector<double>& values, std::size_t d_max) { return select_dimension(values, d_max); },
      py::arg("values"), py::arg("d_max") = 0, "Profile-likelihood elbow of descending values.");

  m.def(
      "procrustes",
      [](const Array& y, const Array& ref) {
        const ProcrustesResult r = procrustes_align(to_matrix(y), to_matrix(ref));
        return py::make_tuple(to_array(r.W), r.residual);
      },
      py::arg("y"), py::arg("ref"), "Orthogonal W minimizing ||y W - ref||_F, and the residual.");

  m.def(
      "auc_roc",
      [](const std::vector<double>& scores, const std::vector<int>& labels) { return auc_roc(scores, labels); },
      py::arg("scores"), py::arg("labels"));

  m.def(
      "adjusted_rand_index",
      [](const std::vector<int>& a, const std::vector<int>& b) { return adjusted_rand_index(a, b); },
      py::arg("a"), py::arg("b"));
}
