#pragma once

#include <cstddef>
#include <vector>

#include "auase/matrix.hpp"

namespace auase {

/// T snapshots over a shared node set: symmetric adjacency (n×n, zero
/// diagonal) and dense covariates (n×p) per interval.
struct DynamicAttributedNetwork {
  std::size_t n = 0;
  std::size_t p = 0;
  std::vector<SparseMatrix> adjacency;
  std::vector<DenseMatrix> covariates;

  std::size_t intervals() const { return adjacency.size(); }

  /// Throws ValidationError on inconsistent shapes, asymmetry, nonzero
  /// diagonal or non-finite covariates.
  void validate() const;
};

}  // namespace auase
