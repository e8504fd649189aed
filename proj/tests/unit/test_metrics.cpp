#include "hdmrge/error.hpp"
#include "hdmrge/metrics.hpp"

#include "oracles.hpp"
#include "synthetic.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace {

using hdmrge::Labels;
using hdmrge::Matrix;
using hdmrge::Vector;

TEST(KnnPredict, ExactMatchReturnsItsLabel) {
  Matrix train(3, 2);
  train << 0, 0, 1, 1, 5, 5;
  Matrix test(1, 2);
  test << 1, 1;
  EXPECT_EQ(hdmrge::knn_predict(train, {1, 2, 3}, test), Labels{2});
}

TEST(KnnPredict, NearestOnALine) {
  Matrix train(2, 1);
  train << -1, 1;
  Matrix test(1, 1);
  test << 0.2;
  EXPECT_EQ(hdmrge::knn_predict(train, {1, 2}, test), Labels{2});
}

TEST(KnnPredict, DistanceTieGoesToLowerIndex) {
  Matrix train(2, 1);
  train << -1, 1;
  Matrix test(1, 1);
  test << 0.0;
  EXPECT_EQ(hdmrge::knn_predict(train, {7, 3}, test), Labels{7});
}

TEST(KnnPredict, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(1);
  const Matrix train = synth::gaussian(30, 3, rng);
  const Matrix test = synth::gaussian(30, 3, rng);
  Labels labels;
  for (int i = 0; i < 30; ++i) labels.push_back(1 + i % 4);
  EXPECT_EQ(hdmrge::knn_predict(train, labels, test), oracle::nearest_neighbor(train, labels, test));
}

TEST(KnnPredict, MajorityVoteWithNearestTieBreak) {
  Matrix train(4, 1);
  train << 0.0, 0.1, 1.0, 1.1;
  Matrix test(1, 1);
  test << 0.9;
  EXPECT_EQ(hdmrge::knn_predict(train, {1, 1, 2, 2}, test, 3), Labels{2});
  // k = 2: one vote each; the nearest neighbor (label 2) wins.
  EXPECT_EQ(hdmrge::knn_predict(train, {1, 1, 2, 1}, test, 2), Labels{2});
}

TEST(KnnPredict, Errors) {
  EXPECT_THROW(hdmrge::knn_predict(Matrix(0, 2), {}, Matrix::Zero(1, 2)), hdmrge::DataError);
  EXPECT_THROW(hdmrge::knn_predict(Matrix::Zero(2, 2), {1}, Matrix::Zero(1, 2)), hdmrge::ShapeError);
  EXPECT_THROW(hdmrge::knn_predict(Matrix::Zero(2, 2), {1, 2}, Matrix::Zero(1, 3)), hdmrge::ShapeError);
}

TEST(NnPrefix, EachPrefixMatchesKnnOnTruncatedColumns) {
  std::mt19937_64 rng(2);
  const Matrix train = synth::gaussian(40, 6, rng);
  const Matrix test = synth::gaussian(25, 6, rng);
  Labels trl;
  Labels tel;
  for (int i = 0; i < 40; ++i) trl.push_back(1 + i % 3);
  for (int i = 0; i < 25; ++i) tel.push_back(1 + i % 3);
  const auto preds = hdmrge::nn_predict_by_prefix(train, trl, test, 6);
  const auto acc = hdmrge::nn_accuracy_by_prefix(train, trl, test, tel, 6);
  for (int d = 1; d <= 6; ++d) {
    const Labels direct = hdmrge::knn_predict(train.leftCols(d), trl, test.leftCols(d));
    EXPECT_EQ(preds[static_cast<std::size_t>(d - 1)], direct);
    const double oa = hdmrge::accuracy_kappa(direct, tel).overall;
    EXPECT_EQ(acc[static_cast<std::size_t>(d - 1)], oa);
  }
}

TEST(NnPrefix, LeaveOneOutSkipsSelf) {
  Matrix y(4, 1);
  y << 0.0, 0.1, 5.0, 5.2;
  const auto pred = hdmrge::nn_predict_by_prefix(y, {1, 2, 3, 4}, y, 1, true);
  EXPECT_EQ(pred[0], (Labels{2, 1, 4, 3}));
  EXPECT_THROW(hdmrge::nn_predict_by_prefix(y, {1, 2, 3, 4}, y.topRows(3), 1, true), hdmrge::ShapeError);
}

TEST(AccuracyKappa, PerfectPrediction) {
  const Labels t{1, 2, 3, 1, 2};
  const auto r = hdmrge::accuracy_kappa(t, t);
  EXPECT_EQ(r.overall, 1.0);
  EXPECT_EQ(r.kappa, 1.0);
  EXPECT_EQ(r.classwise, (std::vector<double>{1, 1, 1}));
}

TEST(AccuracyKappa, AllOneClassOnBalancedBinary) {
  const auto r = hdmrge::accuracy_kappa({1, 1, 1, 1}, {1, 1, 2, 2});
  EXPECT_EQ(r.overall, 0.5);
  EXPECT_NEAR(r.kappa, 0.0, 1e-15);
  EXPECT_EQ(r.classes, (std::vector<int>{1, 2}));
  EXPECT_EQ(r.classwise, (std::vector<double>{1.0, 0.0}));
}

TEST(AccuracyKappa, SingleClassHasUndefinedKappa) {
  const auto r = hdmrge::accuracy_kappa({3, 3, 3}, {3, 3, 3});
  EXPECT_FALSE(r.kappa_defined);
  EXPECT_TRUE(std::isnan(r.kappa));
  EXPECT_EQ(r.overall, 1.0);
}

TEST(AccuracyKappa, DisjointLabelSetsStillDefined) {
  const auto r = hdmrge::accuracy_kappa({5, 6, 5, 6}, {1, 2, 1, 2});
  EXPECT_EQ(r.overall, 0.0);
  EXPECT_TRUE(r.kappa_defined);
  EXPECT_EQ(r.kappa, 0.0);
}

TEST(AccuracyKappa, LengthMismatch) {
  EXPECT_THROW(hdmrge::accuracy_kappa({1, 2}, {1}), hdmrge::ShapeError);
}

// Property: kappa <= OA, and kappa = 1 exactly on perfect multi-class predictions.
TEST(AccuracyKappaProperty, KappaNeverExceedsAccuracy) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> label(1, 5);
  for (int trial = 0; trial < 500; ++trial) {
    Labels t(50);
    Labels p(50);
    for (int i = 0; i < 50; ++i) {
      t[static_cast<std::size_t>(i)] = label(rng);
      p[static_cast<std::size_t>(i)] = trial % 3 == 0 ? t[static_cast<std::size_t>(i)] : label(rng);
    }
    const auto r = hdmrge::accuracy_kappa(p, t);
    if (!r.kappa_defined) continue;
    EXPECT_LE(r.kappa, r.overall + 1e-15);
    EXPECT_EQ(r.kappa == 1.0, p == t);
  }
}

TEST(FisherScore, CollapsedClassesAreLargeAndFlagged) {
  Matrix y(4, 2);
  y << 0, 0, 0, 0, 3, 1, 3, 1;
  const auto r = hdmrge::fisher_score(y, {1, 1, 2, 2});
  EXPECT_TRUE(r.rank_deficient);
  EXPECT_TRUE(std::isfinite(r.score));
  EXPECT_GT(r.score, 1e6);
}

TEST(FisherScore, IdenticalMeansScoreNearZero) {
  Matrix y(4, 1);
  y << -1, 1, 1, -1;
  EXPECT_NEAR(hdmrge::fisher_score(y, {1, 1, 2, 2}).score, 0.0, 1e-12);
}

TEST(FisherScore, MatchesTwoClassClosedForm) {
  Matrix y(4, 1);
  y << 0, 2, 4, 6;
  // Class means 1 and 5, grand mean 3: S_w = 4, S_b = 2*4 + 2*4 = 16.
  EXPECT_NEAR(hdmrge::fisher_score(y, {1, 1, 2, 2}).score, 16.0 / 4.0, 1e-8);
}

TEST(FisherScore, Errors) {
  Matrix y = Matrix::Random(4, 2);
  EXPECT_THROW(hdmrge::fisher_score(y, {1, 1, 1, 1}), hdmrge::MetricError);
  EXPECT_THROW(hdmrge::fisher_score(y, {1, 1, 1, 2}), hdmrge::MetricError);
}

TEST(FisherScoreProperty, GrowsWithMeanSeparation) {
  std::mt19937_64 rng(4);
  const Matrix noise = synth::gaussian(200, 2, rng);
  Labels labels;
  for (int i = 0; i < 200; ++i) labels.push_back(i < 100 ? 1 : 2);
  double prev = -1.0;
  for (double sep : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    Matrix y = noise;
    y.bottomRows(100).col(0).array() += sep;
    const double s = hdmrge::fisher_score(y, labels).score;
    EXPECT_GT(s, prev);
    prev = s;
  }
}

TEST(KMeans, FarPairsCluster) {
  Matrix y(4, 1);
  y << 0.0, 0.1, 100.0, 100.1;
  const auto r = hdmrge::kmeans(y, 2);
  EXPECT_EQ(r.assignments[0], r.assignments[1]);
  EXPECT_EQ(r.assignments[2], r.assignments[3]);
  EXPECT_NE(r.assignments[0], r.assignments[2]);
}

TEST(KMeans, KEqualsMGivesZeroInertia) {
  std::mt19937_64 rng(5);
  const Matrix y = synth::gaussian(7, 2, rng);
  const auto r = hdmrge::kmeans(y, 7);
  EXPECT_EQ(r.inertia, 0.0);
  std::vector<int> a = r.assignments;
  std::sort(a.begin(), a.end());
  EXPECT_EQ(std::unique(a.begin(), a.end()) - a.begin(), 7);
}

TEST(KMeans, KAboveMIsParameterError) {
  EXPECT_THROW(hdmrge::kmeans(Matrix::Zero(3, 1), 4), hdmrge::ParameterError);
  EXPECT_THROW(hdmrge::kmeans(Matrix::Zero(3, 1), 0), hdmrge::ParameterError);
}

TEST(KMeans, DeterministicUnderSeed) {
  const auto data = synth::blobs(90, 2, 3, 4.0, 6);
  hdmrge::KMeansOptions o;
  o.seed = 17;
  const auto a = hdmrge::kmeans(data.x, 3, o);
  const auto b = hdmrge::kmeans(data.x, 3, o);
  EXPECT_EQ(a.assignments, b.assignments);
  EXPECT_EQ(a.inertia, b.inertia);
}

TEST(KMeansProperty, RecoversWellSeparatedBlobs) {
  int recovered = 0;
  for (int run = 0; run < 100; ++run) {
    std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(run));
    Matrix x = synth::gaussian(60, 2, rng);
    Labels truth;
    for (int i = 0; i < 60; ++i) {
      truth.push_back(1 + i % 3);
      x(i, i % 3 == 1 ? 0 : 1) += i % 3 == 0 ? 0.0 : 20.0;
    }
    hdmrge::KMeansOptions o;
    o.seed = static_cast<std::uint64_t>(run);
    const auto r = hdmrge::kmeans(x, 3, o);
    if (hdmrge::nmi(r.assignments, truth) > 1.0 - 1e-12) ++recovered;
  }
  EXPECT_GE(recovered, 95);
}

TEST(Nmi, IdentityIsOne) {
  EXPECT_NEAR(hdmrge::nmi({1, 2, 3, 1}, {1, 2, 3, 1}), 1.0, 1e-15);
}

TEST(Nmi, ConstantAssignmentIsZero) {
  EXPECT_EQ(hdmrge::nmi({0, 0, 0, 0}, {1, 2, 1, 2}), 0.0);
  EXPECT_EQ(hdmrge::nmi({4, 4}, {9, 9}), 1.0);
}

TEST(Nmi, RelabeledPerfectContingency) {
  EXPECT_NEAR(hdmrge::nmi({0, 0, 1, 1}, {7, 7, 3, 3}), 1.0, 1e-15);
}

TEST(Nmi, MatchesHandComputedValue) {
  // Contingency [[2,1],[0,1]], n=4.
  const double n = 4;
  const double hu = -(0.75 * std::log(0.75) + 0.25 * std::log(0.25));
  const double hv = -(0.5 * std::log(0.5) * 2);
  const double mi = (2 / n) * std::log((2 / n) / (0.75 * 0.5)) + (1 / n) * std::log((1 / n) / (0.75 * 0.5)) +
                    (1 / n) * std::log((1 / n) / (0.25 * 0.5));
  EXPECT_NEAR(hdmrge::nmi({1, 1, 1, 2}, {1, 1, 2, 2}), mi / std::sqrt(hu * hv), 1e-14);
}

TEST(NmiProperty, InvariantUnderRelabeling) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> lab(0, 4);
  for (int trial = 0; trial < 100; ++trial) {
    Labels a(40);
    Labels b(40);
    for (std::size_t i = 0; i < 40; ++i) {
      a[i] = lab(rng);
      b[i] = lab(rng);
    }
    std::vector<int> perm{0, 1, 2, 3, 4};
    std::shuffle(perm.begin(), perm.end(), rng);
    Labels ap = a;
    for (int& v : ap) v = 10 + perm[static_cast<std::size_t>(v)];
    EXPECT_NEAR(hdmrge::nmi(a, b), hdmrge::nmi(ap, b), 1e-12);
    EXPECT_NEAR(hdmrge::nmi(a, b), hdmrge::nmi(b, ap), 1e-12);
  }
}

TEST(Silhouette, TightFarClustersNearOne) {
  Matrix y(4, 1);
  y << 0.0, 0.01, 100.0, 100.01;
  EXPECT_GT(hdmrge::silhouette(y, {1, 1, 2, 2}).score, 0.999);
}

TEST(Silhouette, ArbitrarySplitIsNearZero) {
  std::mt19937_64 rng(8);
  const Matrix y = synth::gaussian(200, 2, rng);
  Labels labels;
  for (int i = 0; i < 200; ++i) labels.push_back(1 + i % 2);
  EXPECT_LT(std::abs(hdmrge::silhouette(y, labels).score), 0.05);
}

TEST(Silhouette, SixPointEnumeration) {
  Matrix y(6, 2);
  y << 0, 0, 1, 0, 0, 1, 4, 4, 5, 4, 2, 2;
  const Labels labels{1, 1, 1, 2, 2, 2};
  EXPECT_NEAR(hdmrge::silhouette(y, labels).score, oracle::silhouette(y, labels), 1e-14);
}

TEST(Silhouette, SingletonScoresZeroAndIsCounted) {
  Matrix y(3, 1);
  y << 0, 0.1, 5;
  const auto r = hdmrge::silhouette(y, {1, 1, 2});
  EXPECT_EQ(r.singletons, 1u);
  EXPECT_NEAR(r.score, oracle::silhouette(y, {1, 1, 2}), 1e-14);
  EXPECT_THROW(hdmrge::silhouette(y, {1, 1, 1}), hdmrge::MetricError);
}

TEST(SilhouetteProperty, IsometryInvariant) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix y = synth::gaussian(30, 3, rng);
    Labels labels;
    for (int i = 0; i < 30; ++i) labels.push_back(1 + i % 3);
    const Matrix q = Eigen::HouseholderQR<Matrix>(synth::gaussian(3, 3, rng)).householderQ();
    const Eigen::RowVector3d shift = synth::gaussian(1, 3, rng);
    const Matrix moved = (y * q).rowwise() + shift;
    EXPECT_NEAR(hdmrge::silhouette(y, labels).score, hdmrge::silhouette(moved, labels).score, 1e-10);
  }
}

TEST(AddNoise, HugeSnrLeavesDataUnchanged) {
  std::mt19937_64 rng(10);
  const Matrix x = synth::gaussian(50, 4, rng);
  EXPECT_LT((hdmrge::add_noise(x, 1e9, 1) - x).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((hdmrge::add_noise(x, 300, 1) - x).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(AddNoise, ZeroDbDoublesPower) {
  std::mt19937_64 rng(11);
  const Matrix x = synth::gaussian(1000, 100, rng);
  const Matrix noise = hdmrge::add_noise(x, 0.0, 5) - x;
  EXPECT_NEAR(noise.squaredNorm() / x.squaredNorm(), 1.0, 0.05);
}

TEST(AddNoise, DeterministicUnderSeed) {
  const Matrix x = Matrix::Random(20, 3);
  EXPECT_EQ(hdmrge::add_noise(x, 10, 3), hdmrge::add_noise(x, 10, 3));
  EXPECT_NE(hdmrge::add_noise(x, 10, 3), hdmrge::add_noise(x, 10, 4));
}

TEST(AddNoise, RejectsNonFinite) {
  Matrix x = Matrix::Zero(2, 2);
  x(0, 0) = std::nan("");
  EXPECT_THROW(hdmrge::add_noise(x, 10, 0), hdmrge::DataError);
}

TEST(AddNoiseProperty, EmpiricalSnrWithinTolerance) {
  std::mt19937_64 rng(12);
  const Matrix x = synth::gaussian(500, 200, rng).array() + 2.0;
  for (double snr : {-5.0, 0.0, 10.0, 20.0, 40.0}) {
    const Matrix noise = hdmrge::add_noise(x, snr, 99) - x;
    EXPECT_NEAR(10.0 * std::log10(x.squaredNorm() / noise.squaredNorm()), snr, 0.2);
  }
}

TEST(Auc, ConstantCurve) {
  EXPECT_DOUBLE_EQ(hdmrge::auc({{1, 2, 3, 4}, {0.8, 0.8, 0.8, 0.8}}), 0.8);
}

TEST(Auc, LinearRamp) {
  EXPECT_NEAR(hdmrge::auc({{0, 5, 10}, {0.0, 0.5, 1.0}}), 0.5, 1e-15);
}

TEST(Auc, ThreePointTrapezoid) {
  EXPECT_NEAR(hdmrge::auc({{1, 2, 3}, {0.2, 0.6, 1.0}}), 0.6, 1e-15);
}

TEST(Auc, Errors) {
  EXPECT_THROW(hdmrge::auc({{1}, {0.5}}), hdmrge::ShapeError);
  EXPECT_THROW(hdmrge::auc({{2, 1}, {0.5, 0.5}}), hdmrge::ShapeError);
  EXPECT_THROW(hdmrge::auc({{1, 2}, {0.5}}), hdmrge::ShapeError);
}

TEST(EvaluateEmbedding, SeparatedClassesScoreWell) {
  const auto train = synth::blobs(60, 2, 3, 10.0, 13);
  const auto test = synth::blobs(60, 2, 3, 10.0, 13);
  const auto r = hdmrge::evaluate_embedding(train.x, train.labels, test.x, test.labels, 1);
  EXPECT_EQ(r.dims, 2);
  EXPECT_EQ(r.accuracy.overall, 1.0);
  EXPECT_GT(r.nmi, 0.9);
  EXPECT_GT(r.silhouette, 0.5);
  EXPECT_GT(r.fisher, 1.0);
}

}  // namespace
