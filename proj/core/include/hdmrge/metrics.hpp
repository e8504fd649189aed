#pragma once

#include "hdmrge/types.hpp"

#include <cstdint>
#include <vector>

namespace hdmrge {

/// k-NN vote in Euclidean distance; ties in distance go to the lower training
/// index, ties in the vote go to the label of the nearest tied neighbor.
Labels knn_predict(const Matrix& train, const Labels& train_labels, const Matrix& test, int k = 1);

/// 1-NN overall accuracy using only the first d columns, for d = 1..max_dims.
/// Squared distances are accumulated one coordinate at a time, so entry d-1
/// is identical to knn_predict on the d-column prefix.
std::vector<double> nn_accuracy_by_prefix(const Matrix& train, const Labels& train_labels,
                                          const Matrix& test, const Labels& test_labels,
                                          int max_dims);

/// 1-NN predictions for every prefix d = 1..max_dims (entry d-1). With
/// leave_one_out, test must be the training set itself and each sample's own
/// row is excluded from its neighbor search.
std::vector<Labels> nn_predict_by_prefix(const Matrix& train, const Labels& train_labels,
                                         const Matrix& test, int max_dims,
                                         bool leave_one_out = false);

struct AccuracyReport {
  double overall = 0.0;
  double kappa = 0.0;
  bool kappa_defined = true;    // false when chance agreement is 1
  std::vector<int> classes;     // distinct truth labels, ascending
  std::vector<double> classwise;// recall per entry of classes
};

AccuracyReport accuracy_kappa(const Labels& predicted, const Labels& truth);

struct FisherResult {
  double score = 0.0;
  bool rank_deficient = false;
};

/// trace(S_w^+ S_b). S_w^+ is the pseudo-inverse of S_w + eps*tau*I with
/// tau = trace(S_w + S_b)/d and eps = 1e-10, so a collapsed within-class
/// scatter yields a large finite score.
FisherResult fisher_score(const Matrix& samples, const Labels& labels);

struct KMeansOptions {
  int restarts = 10;
  int max_iterations = 300;
  double tolerance = 1e-6;  // relative inertia change
  std::uint64_t seed = 0;
};

struct KMeansResult {
  Labels assignments;  // 0..K-1
  Matrix centroids;    // K x d
  double inertia = 0.0;
};

/// Lloyd iterations from k-means++ seeds; best inertia over restarts.
KMeansResult kmeans(const Matrix& samples, int clusters, const KMeansOptions& options = {});

/// I(U;V) / sqrt(H(U) H(V)).
double nmi(const Labels& a, const Labels& b);

struct SilhouetteResult {
  double score = 0.0;
  std::size_t singletons = 0;  // samples alone in their class, scored 0
};

SilhouetteResult silhouette(const Matrix& samples, const Labels& labels);

/// i.i.d. Gaussian noise with variance mean(X^2) / 10^(snr_db/10).
/// snr_db is capped at 300.
Matrix add_noise(const Matrix& samples, double snr_db, std::uint64_t seed);

struct LearningCurve {
  std::vector<int> dims;
  std::vector<double> accuracy;
};

/// Trapezoidal area normalized by (d_max - d_min).
double auc(const LearningCurve& curve);

struct MetricsReport {
  AccuracyReport accuracy;
  double nmi = 0.0;
  double silhouette = 0.0;
  double fisher = 0.0;
  bool fisher_rank_deficient = false;
  int dims = 0;
};

/// Metrics for given predictions on an embedding: OA/kappa from predicted,
/// cluster-quality metrics on the embedding.
MetricsReport evaluate_predictions(const Matrix& embedding, const Labels& truth,
                                   const Labels& predicted, std::uint64_t seed);

/// 1-NN classification of test against train plus cluster-quality metrics on
/// the test embedding (k-means with K = number of test classes).
MetricsReport evaluate_embedding(const Matrix& train, const Labels& train_labels,
                                 const Matrix& test, const Labels& test_labels,
                                 std::uint64_t seed);

}  // namespace hdmrge
