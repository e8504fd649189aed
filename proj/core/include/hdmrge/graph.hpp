#pragma once

#include "hdmrge/types.hpp"

#include <cstddef>

namespace hdmrge {

/// Symmetric affinity matrix with zero diagonal. The supervised builder only
/// produces 0/1 entries between samples of the same class.
struct AffinityGraph {
  SparseMatrix weights;
  int k = 0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(weights.rows()); }
};

struct LaplacianPair {
  SparseMatrix laplacian;  // L = D - W
  Vector degree;           // diagonal of D
};

/// Connects every sample to its k nearest same-class samples (Euclidean
/// distance on standardized features, ties to the lower index), then
/// symmetrizes by logical OR.
AffinityGraph build_supervised_affinity(const Matrix& samples, const Labels& labels, int k);

/// Wraps an explicit weight matrix. Requires square, symmetric, nonnegative,
/// zero diagonal.
AffinityGraph graph_from_weights(const Matrix& weights);

LaplacianPair laplacian(const AffinityGraph& graph);

std::size_t connected_components(const AffinityGraph& graph);

}  // namespace hdmrge
