#pragma once

#include "hdmrge/basis.hpp"
#include "hdmrge/graph.hpp"
#include "hdmrge/types.hpp"

#include <string_view>

namespace hdmrge {

enum class EmbeddingKind { hdmr, lpp };

std::string_view to_string(EmbeddingKind kind);
EmbeddingKind parse_embedding_kind(std::string_view text);

struct HdmrParams {
  int order = 4;        // p
  double beta = 100.0;  // ridge on the coefficients
  int k = 5;            // graph neighborhood
  int dims = 2;         // d
  double margin = 0.05; // basis range padding

  void validate() const;
};

/// Explicit out-of-sample map y = alpha^T phi(x). For lpp, phi(x) is the
/// standardized raw feature vector.
struct EmbeddingModel {
  EmbeddingKind kind = EmbeddingKind::hdmr;
  BasisSpec basis;      // hdmr only
  Standardizer scaling; // lpp only
  Matrix alpha;         // (n*p or n) x d
  Vector eigenvalues;   // d ascending

  int dims() const noexcept { return static_cast<int>(alpha.cols()); }
  std::size_t features() const noexcept;
};

/// What fit does when fewer nontrivial modes exist than requested.
enum class DimensionPolicy { exact, at_most };

struct FitResult {
  EmbeddingModel model;
  Matrix embedding;  // training samples, m x d
  AffinityGraph graph;
};

FitResult fit(EmbeddingKind kind, const Matrix& samples, const Labels& labels,
              const HdmrParams& params, DimensionPolicy policy = DimensionPolicy::exact);

/// Same as fit but reuses a graph already built on these samples.
FitResult fit_with_graph(EmbeddingKind kind, const Matrix& samples, const AffinityGraph& graph,
                         std::size_t num_classes, const HdmrParams& params,
                         DimensionPolicy policy = DimensionPolicy::exact);

inline FitResult fit_hdmr(const Matrix& samples, const Labels& labels, const HdmrParams& params) {
  return fit(EmbeddingKind::hdmr, samples, labels, params);
}

inline FitResult fit_lpp(const Matrix& samples, const Labels& labels, const HdmrParams& params) {
  return fit(EmbeddingKind::lpp, samples, labels, params);
}

/// Columns are the per-sample design vectors the model is linear in:
/// phi(x) for hdmr, standardized x for lpp.
Matrix design_matrix(const EmbeddingModel& model, const Matrix& samples);

/// t x d embedding of new samples.
Matrix transform(const EmbeddingModel& model, const Matrix& samples);

/// Laplacian eigenmaps on the training graph: eigenvectors of L y = lambda D y
/// for the d smallest nonzero eigenvalues (one zero mode per component is
/// dropped). Training samples only.
Matrix direct_embed(const AffinityGraph& graph, int d);

/// Per-dimension J_c = sum_ij W_ij (Y_ic - Y_jc)^2 over ordered pairs.
Vector objective(const Matrix& embedding, const AffinityGraph& graph);

}  // namespace hdmrge
