#include "hdmrge/metrics.hpp"

#include "hdmrge/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>

namespace hdmrge {

namespace {

void check_labeled(const Matrix& samples, const Labels& labels, const char* what) {
  if (static_cast<std::size_t>(samples.rows()) != labels.size()) {
    throw ShapeError(std::string(what) + ": " + std::to_string(labels.size()) +
                     " labels for " + std::to_string(samples.rows()) + " samples");
  }
}

// Sample-major copy so each sample is contiguous.
Matrix columns_per_sample(const Matrix& samples) { return samples.transpose(); }

double squared_distance(const double* a, const double* b, Eigen::Index d) {
  double acc = 0.0;
  for (Eigen::Index c = 0; c < d; ++c) {
    const double diff = a[c] - b[c];
    acc += diff * diff;
  }
  return acc;
}

}  // namespace

Labels knn_predict(const Matrix& train, const Labels& train_labels, const Matrix& test, int k) {
  check_labeled(train, train_labels, "knn_predict");
  if (train.rows() == 0) throw DataError("knn_predict: empty training set");
  if (test.cols() != train.cols()) throw ShapeError("knn_predict: dimension mismatch");
  if (k < 1 || k > train.rows()) throw ParameterError("knn_predict: k out of range");

  const Matrix tr = columns_per_sample(train);
  const Matrix te = columns_per_sample(test);
  const Eigen::Index d = train.cols();
  Labels out(static_cast<std::size_t>(test.rows()));
  std::vector<std::pair<double, Eigen::Index>> dist(static_cast<std::size_t>(train.rows()));

  for (Eigen::Index i = 0; i < test.rows(); ++i) {
    const double* q = te.col(i).data();
    if (k == 1) {
      double best = std::numeric_limits<double>::infinity();
      Eigen::Index at = 0;
      for (Eigen::Index j = 0; j < tr.cols(); ++j) {
        const double dj = squared_distance(q, tr.col(j).data(), d);
        if (dj < best) {
          best = dj;
          at = j;
        }
      }
      out[static_cast<std::size_t>(i)] = train_labels[static_cast<std::size_t>(at)];
      continue;
    }
    for (Eigen::Index j = 0; j < tr.cols(); ++j) {
      dist[static_cast<std::size_t>(j)] = {squared_distance(q, tr.col(j).data(), d), j};
    }
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    std::map<int, int> votes;
    int top = 0;
    for (int t = 0; t < k; ++t) {
      top = std::max(top, ++votes[train_labels[static_cast<std::size_t>(dist[t].second)]]);
    }
    for (int t = 0; t < k; ++t) {
      const int label = train_labels[static_cast<std::size_t>(dist[t].second)];
      if (votes[label] == top) {
        out[static_cast<std::size_t>(i)] = label;
        break;
      }
    }
  }
  return out;
}

std::vector<Labels> nn_predict_by_prefix(const Matrix& train, const Labels& train_labels,
                                         const Matrix& test, int max_dims, bool leave_one_out) {
  check_labeled(train, train_labels, "nn_predict_by_prefix");
  if (train.rows() == 0) throw DataError("nn_predict_by_prefix: empty training set");
  if (test.cols() != train.cols()) throw ShapeError("nn_predict_by_prefix: dimension mismatch");
  if (max_dims < 1 || max_dims > train.cols()) {
    throw ParameterError("nn_predict_by_prefix: max_dims out of range");
  }
  if (leave_one_out && (test.rows() != train.rows() || train.rows() < 2)) {
    throw ShapeError("leave-one-out needs test == train with at least 2 samples");
  }

  const Matrix tr = columns_per_sample(train);
  const Matrix te = columns_per_sample(test);
  std::vector<Labels> out(static_cast<std::size_t>(max_dims),
                          Labels(static_cast<std::size_t>(test.rows())));
  std::vector<double> acc(static_cast<std::size_t>(train.rows()));

  for (Eigen::Index i = 0; i < test.rows(); ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    const double* q = te.col(i).data();
    for (int c = 0; c < max_dims; ++c) {
      double best = std::numeric_limits<double>::infinity();
      Eigen::Index at = 0;
      for (Eigen::Index j = 0; j < tr.cols(); ++j) {
        const double diff = q[c] - tr(c, j);
        double& a = acc[static_cast<std::size_t>(j)];
        a += diff * diff;
        if (a < best && !(leave_one_out && j == i)) {
          best = a;
          at = j;
        }
      }
      out[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)] =
          train_labels[static_cast<std::size_t>(at)];
    }
  }
  return out;
}

std::vector<double> nn_accuracy_by_prefix(const Matrix& train, const Labels& train_labels,
                                          const Matrix& test, const Labels& test_labels,
                                          int max_dims) {
  check_labeled(test, test_labels, "nn_accuracy_by_prefix");
  const auto predicted = nn_predict_by_prefix(train, train_labels, test, max_dims);
  std::vector<double> out;
  out.reserve(predicted.size());
  for (const Labels& pred : predicted) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == test_labels[i] ? 1 : 0;
    out.push_back(pred.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(pred.size()));
  }
  return out;
}

AccuracyReport accuracy_kappa(const Labels& predicted, const Labels& truth) {
  if (predicted.size() != truth.size()) throw ShapeError("accuracy: length mismatch");
  if (truth.empty()) throw DataError("accuracy: empty label vectors");
  const auto n = static_cast<double>(truth.size());

  std::map<int, std::size_t> truth_count;
  std::map<int, std::size_t> pred_count;
  std::map<int, std::size_t> hits;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++truth_count[truth[i]];
    ++pred_count[predicted[i]];
    if (predicted[i] == truth[i]) {
      ++correct;
      ++hits[truth[i]];
    }
  }

  AccuracyReport out;
  out.overall = static_cast<double>(correct) / n;
  double chance = 0.0;
  for (const auto& [label, count] : truth_count) {
    const auto it = pred_count.find(label);
    if (it != pred_count.end()) {
      chance += (static_cast<double>(count) / n) * (static_cast<double>(it->second) / n);
    }
    out.classes.push_back(label);
    out.classwise.push_back(static_cast<double>(hits[label]) / static_cast<double>(count));
  }
  if (1.0 - chance <= 1e-15) {
    out.kappa = std::numeric_limits<double>::quiet_NaN();
    out.kappa_defined = false;
  } else {
    out.kappa = (out.overall - chance) / (1.0 - chance);
  }
  return out;
}

FisherResult fisher_score(const Matrix& samples, const Labels& labels) {
  check_labeled(samples, labels, "fisher_score");
  std::map<int, std::vector<Eigen::Index>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    members[labels[i]].push_back(static_cast<Eigen::Index>(i));
  }
  if (members.size() < 2) throw MetricError("Fisher score needs at least 2 classes");
  for (const auto& [label, idx] : members) {
    if (idx.size() < 2) {
      throw MetricError("Fisher score: class " + std::to_string(label) + " has fewer than 2 samples");
    }
  }

  const Eigen::Index d = samples.cols();
  const Vector mean = samples.colwise().mean().transpose();
  Matrix within = Matrix::Zero(d, d);
  Matrix between = Matrix::Zero(d, d);
  for (const auto& [label, idx] : members) {
    Vector mu = Vector::Zero(d);
    for (const Eigen::Index i : idx) mu += samples.row(i).transpose();
    mu /= static_cast<double>(idx.size());
    for (const Eigen::Index i : idx) {
      const Vector c = samples.row(i).transpose() - mu;
      within.noalias() += c * c.transpose();
    }
    const Vector g = mu - mean;
    between.noalias() += static_cast<double>(idx.size()) * g * g.transpose();
  }

  FisherResult out;
  const double tau = (within + between).trace() / static_cast<double>(d);
  Eigen::SelfAdjointEigenSolver<Matrix> sw(within);
  const double top = std::max(sw.eigenvalues().maxCoeff(), tau);
  const auto rank = (sw.eigenvalues().array() > 1e-12 * top).count();
  out.rank_deficient = rank < d;
  if (!(tau > 0.0)) return out;

  Eigen::SelfAdjointEigenSolver<Matrix> reg(within + 1e-10 * tau * Matrix::Identity(d, d));
  const Vector ev = reg.eigenvalues();
  const double cutoff = 1e-15 * ev.maxCoeff();
  Vector inv = Vector::Zero(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (ev(i) > cutoff) inv(i) = 1.0 / ev(i);
  }
  const Matrix& q = reg.eigenvectors();
  const Matrix pinv = q * inv.asDiagonal() * q.transpose();
  out.score = (pinv * between).trace();
  return out;
}

namespace {

struct KMeansRun {
  Labels assignments;
  Matrix centroids;
  double inertia = 0.0;
};

KMeansRun kmeans_once(const Matrix& pts, int clusters, const KMeansOptions& options,
                      std::mt19937_64& rng) {
  // pts is d x m (one sample per column).
  const Eigen::Index d = pts.rows();
  const Eigen::Index m = pts.cols();
  Matrix centers(d, clusters);
  std::vector<bool> chosen(static_cast<std::size_t>(m), false);
  std::vector<double> nearest(static_cast<std::size_t>(m), std::numeric_limits<double>::infinity());

  std::uniform_int_distribution<Eigen::Index> pick(0, m - 1);
  Eigen::Index first = pick(rng);
  for (int c = 0; c < clusters; ++c) {
    Eigen::Index at = first;
    if (c > 0) {
      double total = 0.0;
      for (double v : nearest) total += v;
      if (total > 0.0) {
        std::uniform_real_distribution<double> u(0.0, total);
        double target = u(rng);
        at = m - 1;
        for (Eigen::Index j = 0; j < m; ++j) {
          target -= nearest[static_cast<std::size_t>(j)];
          if (target < 0.0 && nearest[static_cast<std::size_t>(j)] > 0.0) {
            at = j;
            break;
          }
        }
      } else {
        // All remaining points coincide with a center; take an unused index.
        std::vector<Eigen::Index> free;
        for (Eigen::Index j = 0; j < m; ++j) {
          if (!chosen[static_cast<std::size_t>(j)]) free.push_back(j);
        }
        std::uniform_int_distribution<std::size_t> pf(0, free.size() - 1);
        at = free[pf(rng)];
      }
    }
    chosen[static_cast<std::size_t>(at)] = true;
    centers.col(c) = pts.col(at);
    for (Eigen::Index j = 0; j < m; ++j) {
      const double dj = (pts.col(j) - centers.col(c)).squaredNorm();
      nearest[static_cast<std::size_t>(j)] = std::min(nearest[static_cast<std::size_t>(j)], dj);
    }
  }

  KMeansRun run;
  run.assignments.assign(static_cast<std::size_t>(m), 0);
  std::vector<double> own(static_cast<std::size_t>(m), 0.0);
  double previous = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    double inertia = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      double best = std::numeric_limits<double>::infinity();
      int at = 0;
      for (int c = 0; c < clusters; ++c) {
        const double dc = (pts.col(j) - centers.col(c)).squaredNorm();
        if (dc < best) {
          best = dc;
          at = c;
        }
      }
      run.assignments[static_cast<std::size_t>(j)] = at;
      own[static_cast<std::size_t>(j)] = best;
      inertia += best;
    }
    run.inertia = inertia;
    if (std::abs(previous - inertia) <= options.tolerance * std::max(previous, 0.0) ||
        inertia == 0.0) {
      break;
    }
    previous = inertia;

    Matrix sums = Matrix::Zero(d, clusters);
    std::vector<std::size_t> counts(static_cast<std::size_t>(clusters), 0);
    for (Eigen::Index j = 0; j < m; ++j) {
      const int c = run.assignments[static_cast<std::size_t>(j)];
      sums.col(c) += pts.col(j);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < clusters; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centers.col(c) = sums.col(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      } else {
        // Empty cluster: move it to the worst-served point.
        const auto worst = std::max_element(own.begin(), own.end()) - own.begin();
        centers.col(c) = pts.col(worst);
        own[static_cast<std::size_t>(worst)] = 0.0;
      }
    }
  }
  run.centroids = centers.transpose();
  return run;
}

}  // namespace

KMeansResult kmeans(const Matrix& samples, int clusters, const KMeansOptions& options) {
  if (clusters < 1 || clusters > samples.rows()) {
    throw ParameterError("kmeans: K = " + std::to_string(clusters) + " must be in [1, " +
                         std::to_string(samples.rows()) + "]");
  }
  if (options.restarts < 1 || options.max_iterations < 1) {
    throw ParameterError("kmeans: restarts and max_iterations must be >= 1");
  }
  const Matrix pts = samples.transpose();
  std::mt19937_64 rng(options.seed);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.restarts; ++r) {
    KMeansRun run = kmeans_once(pts, clusters, options, rng);
    if (run.inertia < best.inertia) {
      best.assignments = std::move(run.assignments);
      best.centroids = std::move(run.centroids);
      best.inertia = run.inertia;
    }
  }
  return best;
}

double nmi(const Labels& a, const Labels& b) {
  if (a.size() != b.size()) throw ShapeError("nmi: length mismatch");
  if (a.empty()) return 0.0;
  const auto n = static_cast<double>(a.size());
  std::map<int, double> pa;
  std::map<int, double> pb;
  std::map<std::pair<int, int>, double> joint;
  for (std::size_t i = 0; i < a.size(); ++i) {
    pa[a[i]] += 1.0;
    pb[b[i]] += 1.0;
    joint[{a[i], b[i]}] += 1.0;
  }
  auto entropy = [n](const std::map<int, double>& counts) {
    double h = 0.0;
    for (const auto& [k, c] : counts) {
      const double p = c / n;
      h -= p * std::log(p);
    }
    return h;
  };
  const double ha = entropy(pa);
  const double hb = entropy(pb);
  if (pa.size() == 1 || pb.size() == 1) return (pa.size() == 1 && pb.size() == 1) ? 1.0 : 0.0;
  double mi = 0.0;
  for (const auto& [key, c] : joint) {
    const double pij = c / n;
    mi += pij * std::log(pij * n * n / (pa[key.first] * pb[key.second]));
  }
  return std::clamp(mi / std::sqrt(ha * hb), 0.0, 1.0);
}

SilhouetteResult silhouette(const Matrix& samples, const Labels& labels) {
  check_labeled(samples, labels, "silhouette");
  const std::vector<int> classes = distinct_labels(labels);
  if (classes.size() < 2) throw MetricError("silhouette needs at least 2 classes");
  std::map<int, std::size_t> slot;
  for (std::size_t c = 0; c < classes.size(); ++c) slot[classes[c]] = c;
  std::vector<std::size_t> label_slot(labels.size());
  std::vector<double> sizes(classes.size(), 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    label_slot[i] = slot[labels[i]];
    sizes[label_slot[i]] += 1.0;
  }

  const Matrix pts = samples.transpose();
  const Eigen::Index d = pts.rows();
  SilhouetteResult out;
  std::vector<double> sums(classes.size());
  double total = 0.0;
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    const std::size_t own = label_slot[static_cast<std::size_t>(i)];
    if (sizes[own] < 2.0) {
      ++out.singletons;
      continue;
    }
    std::fill(sums.begin(), sums.end(), 0.0);
    for (Eigen::Index j = 0; j < pts.cols(); ++j) {
      if (j == i) continue;
      sums[label_slot[static_cast<std::size_t>(j)]] +=
          std::sqrt(squared_distance(pts.col(i).data(), pts.col(j).data(), d));
    }
    const double a = sums[own] / (sizes[own] - 1.0);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < classes.size(); ++c) {
      if (c != own) b = std::min(b, sums[c] / sizes[c]);
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  out.score = total / static_cast<double>(pts.cols());
  return out;
}

Matrix add_noise(const Matrix& samples, double snr_db, std::uint64_t seed) {
  if (!samples.allFinite()) throw DataError("add_noise: non-finite input");
  if (samples.size() == 0) return samples;
  const double snr = std::min(snr_db, 300.0);
  const double power = samples.squaredNorm() / static_cast<double>(samples.size());
  const double sigma = std::sqrt(power / std::pow(10.0, snr / 10.0));
  Matrix out = samples;
  if (!(sigma > 0.0)) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] += noise(rng);
  return out;
}

double auc(const LearningCurve& curve) {
  if (curve.dims.size() != curve.accuracy.size()) throw ShapeError("auc: dims/accuracy mismatch");
  if (curve.dims.size() < 2) throw ShapeError("auc: need at least 2 points");
  double area = 0.0;
  for (std::size_t i = 1; i < curve.dims.size(); ++i) {
    const double step = curve.dims[i] - curve.dims[i - 1];
    if (!(step > 0)) throw ShapeError("auc: dims must be strictly ascending");
    area += 0.5 * step * (curve.accuracy[i] + curve.accuracy[i - 1]);
  }
  return area / static_cast<double>(curve.dims.back() - curve.dims.front());
}

MetricsReport evaluate_predictions(const Matrix& embedding, const Labels& truth,
                                   const Labels& predicted, std::uint64_t seed) {
  check_labeled(embedding, truth, "evaluate_predictions");
  MetricsReport out;
  out.dims = static_cast<int>(embedding.cols());
  out.accuracy = accuracy_kappa(predicted, truth);

  const auto classes = static_cast<int>(distinct_labels(truth).size());
  KMeansOptions km;
  km.seed = seed;
  out.nmi = nmi(kmeans(embedding, std::min<int>(classes, static_cast<int>(embedding.rows())), km)
                    .assignments,
                truth);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  try {
    out.silhouette = silhouette(embedding, truth).score;
  } catch (const MetricError&) {
    out.silhouette = nan;
  }
  try {
    const FisherResult f = fisher_score(embedding, truth);
    out.fisher = f.score;
    out.fisher_rank_deficient = f.rank_deficient;
  } catch (const MetricError&) {
    out.fisher = nan;
  }
  return out;
}

MetricsReport evaluate_embedding(const Matrix& train, const Labels& train_labels,
                                 const Matrix& test, const Labels& test_labels,
                                 std::uint64_t seed) {
  check_labeled(test, test_labels, "evaluate_embedding");
  return evaluate_predictions(test, test_labels, knn_predict(train, train_labels, test, 1), seed);
}

}  // namespace hdmrge
