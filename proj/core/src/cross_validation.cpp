#include "hdmrge/cross_validation.hpp"

#include "hdmrge/error.hpp"
#include "hdmrge/metrics.hpp"
#include "hdmrge/split.hpp"

#include <map>
#include <optional>
#include <tuple>

namespace hdmrge {

namespace {

struct Fold {
  Matrix train;
  Labels train_labels;
  Matrix test;
  Labels test_labels;
  std::size_t classes = 0;
};

Matrix take_rows(const Matrix& x, const std::vector<std::size_t>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

// Classes left with a single sample on the training side cannot form a
// supervised graph; they are left out of that fold's fit, and their held-out
// samples still count against the score.
Fold make_fold(const Matrix& samples, const Labels& labels, const SplitPlan& plan) {
  std::vector<std::size_t> keep;
  for (const std::size_t i : plan.train) {
    if (plan.train_counts.at(labels[i]) >= 2) keep.push_back(i);
  }
  Fold f;
  f.train = take_rows(samples, keep);
  for (const std::size_t i : keep) f.train_labels.push_back(labels[i]);
  f.test = take_rows(samples, plan.test);
  for (const std::size_t i : plan.test) f.test_labels.push_back(labels[i]);
  f.classes = distinct_labels(f.train_labels).size();
  return f;
}

double fold_accuracy(EmbeddingKind kind, const Fold& fold, const AffinityGraph& graph,
                     const HdmrParams& params) {
  const FitResult fr = fit_with_graph(kind, fold.train, graph, fold.classes, params,
                                      DimensionPolicy::at_most);
  const Matrix test = transform(fr.model, fold.test);
  const Labels pred = knn_predict(fr.embedding, fold.train_labels, test, 1);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == fold.test_labels[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

}  // namespace

CvResult cross_validate(EmbeddingKind kind, const Matrix& samples, const Labels& labels,
                        const ParamGrid& grid, const HdmrParams& base, int folds,
                        std::uint64_t seed) {
  if (static_cast<std::size_t>(samples.rows()) != labels.size()) {
    throw ShapeError("cross_validate: label count mismatch");
  }
  if (grid.orders.empty() || grid.betas.empty() || grid.ks.empty()) {
    throw ParameterError("cross_validate: every grid axis needs at least one value");
  }
  const std::vector<int> orders =
      kind == EmbeddingKind::lpp ? std::vector<int>{grid.orders.front()} : grid.orders;

  const std::size_t classes = distinct_labels(labels).size();
  HdmrParams params = base;
  params.dims = static_cast<int>(classes);

  CvResult result;
  const bool single = orders.size() * grid.betas.size() * grid.ks.size() == 1;
  if (single) {
    params.order = orders.front();
    params.beta = grid.betas.front();
    params.k = grid.ks.front();
    params.validate();
    result.best = params;
    result.best.dims = base.dims;
    result.scores.push_back({params.order, params.beta, params.k, 0.0, true, "single grid point, not scored"});
    return result;
  }

  std::vector<Fold> parts;
  for (const SplitPlan& plan : stratified_folds(labels, folds, seed)) {
    parts.push_back(make_fold(samples, labels, plan));
  }

  // Graphs depend on (fold, k) only.
  std::map<std::pair<std::size_t, int>, std::optional<AffinityGraph>> graphs;
  std::map<std::pair<std::size_t, int>, std::string> graph_errors;
  for (std::size_t f = 0; f < parts.size(); ++f) {
    for (const int k : grid.ks) {
      try {
        graphs[{f, k}] = build_supervised_affinity(parts[f].train, parts[f].train_labels, k);
      } catch (const Error& e) {
        graphs[{f, k}] = std::nullopt;
        graph_errors[{f, k}] = e.what();
      }
    }
  }

  std::optional<std::size_t> best;
  auto key = [](const GridScore& g) { return std::make_tuple(g.order, g.beta, g.k); };
  for (const int p : orders) {
    for (const double beta : grid.betas) {
      for (const int k : grid.ks) {
        GridScore gs{p, beta, k, 0.0, true, {}};
        params.order = p;
        params.beta = beta;
        params.k = k;
        double sum = 0.0;
        try {
          params.validate();
          for (std::size_t f = 0; f < parts.size(); ++f) {
            const auto& g = graphs.at({f, k});
            if (!g) throw ParameterError(graph_errors.at({f, k}));
            sum += fold_accuracy(kind, parts[f], *g, params);
          }
          gs.score = sum / static_cast<double>(parts.size());
        } catch (const Error& e) {
          gs.score = 0.0;
          gs.feasible = false;
          gs.note = e.what();
        }
        result.scores.push_back(gs);
        const std::size_t idx = result.scores.size() - 1;
        if (!best || gs.score > result.scores[*best].score ||
            (gs.score == result.scores[*best].score && key(gs) < key(result.scores[*best]))) {
          best = idx;
        }
      }
    }
  }

  const GridScore& winner = result.scores[*best];
  result.best = base;
  result.best.order = winner.order;
  result.best.beta = winner.beta;
  result.best.k = winner.k;
  result.best_score = winner.score;
  return result;
}

}  // namespace hdmrge
