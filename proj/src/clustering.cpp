#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "auase/error.hpp"
#include "auase/eval.hpp"
#include "auase/random.hpp"

namespace auase {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
  return s;
}

DenseMatrix plus_plus_seeds(const DenseMatrix& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.rows();
  DenseMatrix centers(k, points.cols());
  std::size_t first = rng.index(n);
  std::copy_n(points.row(first).begin(), points.cols(), centers.row(0).begin());
  std::vector<double> closest(n);
  for (std::size_t i = 0; i < n; ++i) closest[i] = squared_distance(points.row(i), centers.row(0));
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : closest) total += v;
    std::size_t pick = rng.index(n);
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double cumulative = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        cumulative += closest[i];
        if (cumulative > target) {
          pick = i;
          break;
        }
      }
    }
    std::copy_n(points.row(pick).begin(), points.cols(), centers.row(c).begin());
    for (std::size_t i = 0; i < n; ++i)
      closest[i] = std::min(closest[i], squared_distance(points.row(i), centers.row(c)));
  }
  return centers;
}

KMeansResult lloyd(const DenseMatrix& points, DenseMatrix centers, std::size_t max_iterations) {
  const std::size_t n = points.rows();
  const std::size_t k = centers.rows();
  const std::size_t dim = points.cols();
  KMeansResult out;
  out.labels.assign(n, -1);
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double dist = squared_distance(points.row(i), centers.row(c));
        if (dist < best_d) {
          best_d = dist;
          best = static_cast<int>(c);
        }
      }
      if (out.labels[i] != best) {
        out.labels[i] = best;
        changed = true;
      }
    }
    if (!changed) break;
    DenseMatrix sums(k, dim);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(out.labels[i]);
      ++counts[c];
      auto s = sums.row(c);
      const auto p = points.row(i);
      for (std::size_t j = 0; j < dim; ++j) s[j] += p[j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;  // empty cluster keeps its previous center
      auto dst = centers.row(c);
      const auto s = sums.row(c);
      for (std::size_t j = 0; j < dim; ++j) dst[j] = s[j] / static_cast<double>(counts[c]);
    }
  }
  out.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    out.inertia += squared_distance(points.row(i), centers.row(static_cast<std::size_t>(out.labels[i])));
  out.centers = std::move(centers);
  return out;
}

}  // namespace

KMeansResult kmeans(const DenseMatrix& points, std::size_t k, std::uint64_t seed,
                    std::size_t restarts, std::size_t max_iterations) {
  require(k >= 1 && k <= points.rows(),
          "kmeans: k = " + std::to_string(k) + " must lie in [1, " + std::to_string(points.rows()) + "]");
  require(restarts >= 1, "kmeans: restarts must be positive");
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < restarts; ++r) {
    Rng rng(mix_seed(seed, r));
    KMeansResult run = lloyd(points, plus_plus_seeds(points, k, rng), max_iterations);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  require(a.size() == b.size(), "adjusted_rand_index: length mismatch");
  require(!a.empty(), "adjusted_rand_index: empty input");
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> rows;
  std::map<int, double> cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  auto choose2 = [](double x) { return 0.5 * x * (x - 1.0); };
  double index = 0.0;
  for (const auto& [key, c] : joint) index += choose2(c);
  double sum_a = 0.0;
  double sum_b = 0.0;
  for (const auto& [key, c] : rows) sum_a += choose2(c);
  for (const auto& [key, c] : cols) sum_b += choose2(c);
  const double total = choose2(static_cast<double>(a.size()));
  const double expected = total > 0.0 ? sum_a * sum_b / total : 0.0;
  const double maximum = 0.5 * (sum_a + sum_b);
  if (maximum == expected) return 1.0;
  return (index - expected) / (maximum - expected);
}

}  // namespace auase
