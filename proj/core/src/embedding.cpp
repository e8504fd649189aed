#include "hdmrge/embedding.hpp"

#include "hdmrge/eigensolve.hpp"
#include "hdmrge/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hdmrge {

std::string_view to_string(EmbeddingKind kind) {
  return kind == EmbeddingKind::hdmr ? "hdmr" : "lpp";
}

EmbeddingKind parse_embedding_kind(std::string_view text) {
  if (text == "hdmr") return EmbeddingKind::hdmr;
  if (text == "lpp") return EmbeddingKind::lpp;
  throw ConfigError("unknown embedding kind '" + std::string(text) + "'");
}

void HdmrParams::validate() const {
  if (order < 1 || order > kMaxLegendreDegree) {
    throw ParameterError("polynomial order must be in [1, " + std::to_string(kMaxLegendreDegree) +
                         "], got " + std::to_string(order));
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be finite and >= 0");
  if (k < 1) throw ParameterError("k must be >= 1");
  if (dims < 1) throw ParameterError("embedding dimension must be >= 1");
  if (!(margin >= 0.0)) throw ParameterError("margin must be >= 0");
}

std::size_t EmbeddingModel::features() const noexcept {
  return kind == EmbeddingKind::hdmr ? basis.features()
                                     : static_cast<std::size_t>(scaling.mean.size());
}

Matrix design_matrix(const EmbeddingModel& model, const Matrix& samples) {
  if (static_cast<std::size_t>(samples.cols()) != model.features()) {
    throw ShapeError("samples have " + std::to_string(samples.cols()) + " features, model expects " +
                     std::to_string(model.features()));
  }
  if (model.kind == EmbeddingKind::hdmr) return expand(model.basis, samples);
  return model.scaling.apply(samples).transpose();
}

Matrix transform(const EmbeddingModel& model, const Matrix& samples) {
  const Matrix design = design_matrix(model, samples);
  if (design.rows() != model.alpha.rows()) {
    throw ShapeError("coefficient matrix does not match the feature map");
  }
  return design.transpose() * model.alpha;
}

namespace {

// Pencil (F L F^T, Fc D Fc^T), Fc = F centered by its degree-weighted row
// means. The centering fixes the constant f0 so the embedding has zero
// degree-weighted mean; F L F^T is unaffected because L 1 = 0.
void assemble_pencil(const Matrix& design, const AffinityGraph& graph, Matrix& a, Matrix& b) {
  const LaplacianPair lap = laplacian(graph);
  const double total = lap.degree.sum();
  if (!(total > 0.0)) throw DataError("affinity graph has no edges");

  const Matrix weighted = design.array().rowwise() * lap.degree.transpose().array();
  const Matrix fdf = weighted * design.transpose();
  const Vector fd1 = weighted.rowwise().sum();
  const Matrix wf = graph.weights * design.transpose();  // m x s

  a = fdf - design * wf;
  b = fdf - (fd1 * fd1.transpose()) / total;
  a = 0.5 * (a + a.transpose());
  b = 0.5 * (b + b.transpose());
}

}  // namespace

FitResult fit_with_graph(EmbeddingKind kind, const Matrix& samples, const AffinityGraph& graph,
                         std::size_t num_classes, const HdmrParams& params,
                         DimensionPolicy policy) {
  params.validate();
  if (graph.size() != static_cast<std::size_t>(samples.rows())) {
    throw ShapeError("graph size does not match the number of samples");
  }

  FitResult result;
  EmbeddingModel& model = result.model;
  model.kind = kind;
  if (kind == EmbeddingKind::hdmr) {
    model.basis = fit_basis(samples, params.order, params.margin);
  } else {
    if (samples.rows() < 2) throw DataError("fitting needs at least 2 samples");
    model.scaling = Standardizer::fit(samples);
  }
  const Matrix design = design_matrix(model, samples);

  Matrix a;
  Matrix b;
  assemble_pencil(design, graph, a, b);

  const auto s = static_cast<int>(design.rows());
  const int wanted = std::min(params.dims + static_cast<int>(num_classes), s);
  const EigenSolution solution = drop_trivial(solve_gep(a, b, wanted, params.beta));

  int available = 0;
  while (available < solution.eigenvalues.size() &&
         !solution.null_direction[static_cast<std::size_t>(available)]) {
    ++available;
  }
  int used = params.dims;
  if (available < params.dims) {
    if (policy == DimensionPolicy::exact || available == 0) {
      throw ParameterError("requested d = " + std::to_string(params.dims) + " but only " +
                           std::to_string(available) + " nontrivial modes are available");
    }
    used = available;
  }

  model.alpha = solution.eigenvectors.leftCols(used);
  model.eigenvalues = solution.eigenvalues.head(used);
  result.graph = graph;
  result.embedding = transform(model, samples);
  return result;
}

FitResult fit(EmbeddingKind kind, const Matrix& samples, const Labels& labels,
              const HdmrParams& params, DimensionPolicy policy) {
  params.validate();
  AffinityGraph graph = build_supervised_affinity(samples, labels, params.k);
  return fit_with_graph(kind, samples, graph, distinct_labels(labels).size(), params, policy);
}

Matrix direct_embed(const AffinityGraph& graph, int d) {
  if (graph.size() == 0) throw DataError("direct embedding of an empty graph");
  if (d < 1) throw ParameterError("embedding dimension must be >= 1");
  const LaplacianPair lap = laplacian(graph);
  const Matrix l = Matrix(lap.laplacian);
  const Matrix deg = lap.degree.asDiagonal();
  const auto m = static_cast<int>(graph.size());
  const int wanted = std::min(d + static_cast<int>(connected_components(graph)), m);
  const EigenSolution solution = drop_trivial(solve_gep(l, deg, wanted, 0.0));
  if (solution.eigenvalues.size() < d) {
    throw ParameterError("requested d = " + std::to_string(d) + " but only " +
                         std::to_string(solution.eigenvalues.size()) +
                         " nontrivial modes are available");
  }
  return solution.eigenvectors.leftCols(d);
}

Vector objective(const Matrix& embedding, const AffinityGraph& graph) {
  const SparseMatrix& w = graph.weights;
  if (w.rows() != embedding.rows()) throw ShapeError("embedding rows do not match graph size");
  Vector j = Vector::Zero(embedding.cols());
  for (Eigen::Index c = 0; c < w.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(w, c); it; ++it) {
      j += it.value() * (embedding.row(it.row()) - embedding.row(it.col())).transpose().cwiseAbs2();
    }
  }
  return j;
}

}  // namespace hdmrge
