#include "hdmrge/graph.hpp"

#include "hdmrge/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>

namespace hdmrge {

AffinityGraph build_supervised_affinity(const Matrix& samples, const Labels& labels, int k) {
  const auto m = static_cast<std::size_t>(samples.rows());
  if (labels.size() != m) {
    throw ShapeError("labels (" + std::to_string(labels.size()) + ") do not match samples (" +
                     std::to_string(m) + ")");
  }
  if (k < 1) throw ParameterError("neighborhood size k must be >= 1, got " + std::to_string(k));

  std::map<int, std::vector<Eigen::Index>> members;
  for (std::size_t i = 0; i < m; ++i) members[labels[i]].push_back(static_cast<Eigen::Index>(i));
  for (const auto& [label, idx] : members) {
    if (idx.size() < 2) {
      throw DataError("class " + std::to_string(label) + " has fewer than 2 samples");
    }
    if (static_cast<std::size_t>(k) > idx.size() - 1) {
      throw ParameterError("k = " + std::to_string(k) + " exceeds size - 1 = " +
                           std::to_string(idx.size() - 1) + " of class " + std::to_string(label));
    }
  }

  const Matrix z = Standardizer::fit(samples).apply(samples);

  std::vector<std::pair<Eigen::Index, Eigen::Index>> edges;
  edges.reserve(m * static_cast<std::size_t>(k));
  std::vector<std::pair<double, Eigen::Index>> candidates;
  for (const auto& [label, idx] : members) {
    for (const Eigen::Index i : idx) {
      candidates.clear();
      for (const Eigen::Index j : idx) {
        if (j == i) continue;
        candidates.emplace_back((z.row(i) - z.row(j)).squaredNorm(), j);
      }
      // Pair comparison orders equal distances by lower index.
      std::partial_sort(candidates.begin(), candidates.begin() + k, candidates.end());
      for (int t = 0; t < k; ++t) {
        const Eigen::Index j = candidates[static_cast<std::size_t>(t)].second;
        edges.emplace_back(std::min(i, j), std::max(i, j));
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * edges.size());
  for (const auto& [i, j] : edges) {
    triplets.emplace_back(i, j, 1.0);
    triplets.emplace_back(j, i, 1.0);
  }
  AffinityGraph graph;
  graph.k = k;
  graph.weights.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  graph.weights.setFromTriplets(triplets.begin(), triplets.end());
  graph.weights.makeCompressed();
  return graph;
}

AffinityGraph graph_from_weights(const Matrix& weights) {
  if (weights.rows() != weights.cols()) throw ShapeError("weight matrix must be square");
  if (!weights.allFinite()) throw DataError("weight matrix has non-finite entries");
  if ((weights - weights.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    throw ShapeError("weight matrix must be symmetric");
  }
  if (weights.size() > 0) {
    if (weights.minCoeff() < 0.0) throw DataError("weights must be nonnegative");
    if (weights.diagonal().cwiseAbs().maxCoeff() != 0.0) {
      throw DataError("weight matrix must have a zero diagonal");
    }
  }
  AffinityGraph graph;
  graph.weights = weights.sparseView();
  graph.weights.makeCompressed();
  return graph;
}

LaplacianPair laplacian(const AffinityGraph& graph) {
  const SparseMatrix& w = graph.weights;
  if (w.rows() != w.cols()) throw ShapeError("affinity matrix must be square");
  LaplacianPair out;
  out.degree = Vector::Zero(w.rows());
  for (Eigen::Index c = 0; c < w.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(w, c); it; ++it) out.degree(it.row()) += it.value();
  }
  SparseMatrix d(w.rows(), w.cols());
  d.reserve(Eigen::VectorXi::Constant(w.cols(), 1));
  for (Eigen::Index i = 0; i < w.rows(); ++i) d.insert(i, i) = out.degree(i);
  out.laplacian = d - w;
  out.laplacian.makeCompressed();
  return out;
}

std::size_t connected_components(const AffinityGraph& graph) {
  const SparseMatrix& w = graph.weights;
  const auto n = static_cast<std::size_t>(w.rows());
  std::vector<bool> seen(n, false);
  std::vector<Eigen::Index> stack;
  std::size_t components = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    ++components;
    seen[start] = true;
    stack.assign(1, static_cast<Eigen::Index>(start));
    while (!stack.empty()) {
      const Eigen::Index v = stack.back();
      stack.pop_back();
      for (SparseMatrix::InnerIterator it(w, v); it; ++it) {
        const auto u = static_cast<std::size_t>(it.row());
        if (it.value() != 0.0 && !seen[u]) {
          seen[u] = true;
          stack.push_back(it.row());
        }
      }
    }
  }
  return components;
}

}  // namespace hdmrge
