#include "hdmrge/experiment.hpp"

#include "hdmrge/embedding.hpp"
#include "hdmrge/error.hpp"
#include "hdmrge/split.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace hdmrge {

namespace fs = std::filesystem;

std::size_t ExperimentSummary::failed_repeats() const {
  return static_cast<std::size_t>(
      std::count_if(repeats.begin(), repeats.end(), [](const RepeatOutcome& r) { return !r.ok; }));
}

double curve_auc(const std::vector<CurveRow>& curve) {
  if (curve.empty()) throw ShapeError("curve_auc: empty curve");
  if (curve.size() == 1) return curve.front().mean_accuracy;
  LearningCurve lc;
  for (const CurveRow& row : curve) {
    lc.dims.push_back(row.dims);
    lc.accuracy.push_back(row.mean_accuracy);
  }
  return auc(lc);
}

namespace {

[[noreturn]] void rethrow_as(ErrorKind kind, const std::string& what) {
  switch (kind) {
    case ErrorKind::config: throw ConfigError(what);
    case ErrorKind::parameter: throw ParameterError(what);
    case ErrorKind::parse: throw ParseError(what, 0, 0);
    case ErrorKind::format: throw FormatError(what);
    case ErrorKind::shape: throw ShapeError(what);
    case ErrorKind::numerical: throw ConditioningError(what, {});
    case ErrorKind::metric: throw MetricError(what);
    case ErrorKind::data: break;
  }
  throw DataError(what);
}

constexpr std::uint64_t kCvStream = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kNoiseStream = 0xD1B54A32D192ED03ULL;
constexpr std::uint64_t kClusterStream = 0x94D049BB133111EBULL;

std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + stream;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Matrix take_rows(const Matrix& x, const std::vector<std::size_t>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

Labels take_labels(const Labels& labels, const std::vector<std::size_t>& rows) {
  Labels out;
  out.reserve(rows.size());
  for (const std::size_t i : rows) out.push_back(labels[i]);
  return out;
}

double accuracy_of(const Labels& pred, const Labels& truth) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == truth[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

// Everything a repeat produces that later stages need.
struct RepeatData {
  Matrix eval_embedding;        // embedding the predictions are scored on
  Labels eval_labels;
  std::vector<std::size_t> eval_rows;  // dataset rows of eval_embedding
  std::vector<Labels> predictions;     // per prefix d
};

std::optional<EmbeddingKind> kind_of(Method m) {
  if (m == Method::hdmr) return EmbeddingKind::hdmr;
  if (m == Method::lpp) return EmbeddingKind::lpp;
  return std::nullopt;
}

HdmrParams single_point(const ExperimentConfig& cfg) {
  HdmrParams p;
  p.order = cfg.grid.orders.front();
  p.beta = cfg.grid.betas.front();
  p.k = cfg.grid.ks.front();
  p.margin = cfg.margin;
  return p;
}

Matrix direct_at_most(const AffinityGraph& graph, int d_max) {
  const int limit = static_cast<int>(graph.size() - connected_components(graph));
  if (limit < 1) throw ParameterError("direct embedding: no nontrivial modes");
  return direct_embed(graph, std::min(d_max, limit));
}

// Selects k for the direct method by leave-one-out 1-NN OA at d = #classes.
int select_direct_k(const Matrix& x, const Labels& labels, const std::vector<int>& ks) {
  if (ks.size() == 1) return ks.front();
  const int classes = static_cast<int>(distinct_labels(labels).size());
  std::optional<std::pair<double, int>> best;
  std::string last_error;
  for (const int k : std::set<int>(ks.begin(), ks.end())) {
    try {
      const Matrix y = direct_at_most(build_supervised_affinity(x, labels, k), classes);
      const auto pred = nn_predict_by_prefix(y, labels, y, static_cast<int>(y.cols()), true);
      const double oa = accuracy_of(pred.back(), labels);
      if (!best || oa > best->first) best = {oa, k};
    } catch (const Error& e) {
      last_error = e.what();
    }
  }
  if (!best) throw ParameterError("no feasible k for the direct method: " + last_error);
  return best->second;
}

RepeatData evaluate_split(const ExperimentConfig& cfg, const Matrix& samples, const Labels& labels,
                          const SplitPlan& plan, const HdmrParams& params) {
  RepeatData out;
  const Matrix x_train = take_rows(samples, plan.train);
  const Labels l_train = take_labels(labels, plan.train);
  if (const auto kind = kind_of(cfg.method)) {
    HdmrParams fp = params;
    fp.dims = cfg.d_max;
    const FitResult fr = fit(*kind, x_train, l_train, fp, DimensionPolicy::at_most);
    out.eval_embedding = transform(fr.model, take_rows(samples, plan.test));
    out.eval_labels = take_labels(labels, plan.test);
    out.eval_rows = plan.test;
    out.predictions = nn_predict_by_prefix(fr.embedding, l_train, out.eval_embedding,
                                           static_cast<int>(out.eval_embedding.cols()));
  } else {
    const AffinityGraph graph = build_supervised_affinity(x_train, l_train, params.k);
    out.eval_embedding = direct_at_most(graph, cfg.d_max);
    out.eval_labels = l_train;
    out.eval_rows = plan.train;
    out.predictions = nn_predict_by_prefix(out.eval_embedding, l_train, out.eval_embedding,
                                           static_cast<int>(out.eval_embedding.cols()), true);
  }
  return out;
}

HdmrParams select_params(const ExperimentConfig& cfg, const Matrix& samples, const Labels& labels,
                         const SplitPlan& plan, std::uint64_t seed) {
  HdmrParams params = single_point(cfg);
  const Matrix x_train = take_rows(samples, plan.train);
  const Labels l_train = take_labels(labels, plan.train);
  if (const auto kind = kind_of(cfg.method)) {
    params = cross_validate(*kind, x_train, l_train, cfg.grid, params, cfg.cv_folds,
                            mix(seed, kCvStream))
                 .best;
  } else {
    params.k = select_direct_k(x_train, l_train, cfg.grid.ks);
  }
  if (cfg.method == Method::lpp) params.order = 1;
  if (cfg.method == Method::direct) {
    params.order = 0;
    params.beta = 0.0;
  }
  return params;
}

std::vector<CurveRow> mean_curve(const std::vector<std::vector<double>>& oa,
                                 const std::vector<std::vector<double>>& kappa) {
  std::vector<CurveRow> curve;
  if (oa.empty()) return curve;
  std::size_t len = oa.front().size();
  for (const auto& row : oa) len = std::min(len, row.size());
  const auto n = static_cast<double>(oa.size());
  for (std::size_t d = 0; d < len; ++d) {
    CurveRow row;
    row.dims = static_cast<int>(d + 1);
    double sum = 0.0;
    double ksum = 0.0;
    for (std::size_t r = 0; r < oa.size(); ++r) {
      sum += oa[r][d];
      ksum += kappa.empty() ? 0.0 : kappa[r][d];
    }
    row.mean_accuracy = sum / n;
    row.mean_kappa = ksum / n;
    double sq = 0.0;
    for (const auto& r : oa) sq += (r[d] - row.mean_accuracy) * (r[d] - row.mean_accuracy);
    row.std_accuracy = oa.size() > 1 ? std::sqrt(sq / (n - 1.0)) : 0.0;
    curve.push_back(row);
  }
  return curve;
}

int best_dims_of(const std::vector<CurveRow>& curve) {
  int best = 0;
  double top = -1.0;
  for (const CurveRow& row : curve) {
    if (row.mean_accuracy > top) {
      top = row.mean_accuracy;
      best = row.dims;
    }
  }
  return best;
}

std::ofstream open_report(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void write_curve(const fs::path& path, const std::vector<CurveRow>& curve) {
  std::ofstream out = open_report(path);
  out << "d,mean_oa,std_oa,mean_kappa\n";
  for (const CurveRow& row : curve) {
    out << row.dims << ',' << num(row.mean_accuracy) << ',' << num(row.std_accuracy) << ','
        << num(row.mean_kappa) << '\n';
  }
}

void write_metrics(const fs::path& path, const std::vector<RepeatMetrics>& metrics,
                   const std::vector<int>& classes) {
  std::ofstream out = open_report(path);
  out << "seed,d,oa,kappa,nmi,fisher,fisher_rank_deficient,silhouette";
  for (const int c : classes) out << ",class_" << c;
  out << '\n';

  std::vector<double> sums(5 + classes.size(), 0.0);
  std::vector<std::size_t> counts(sums.size(), 0);
  auto add = [&](std::size_t slot, double v) {
    if (std::isnan(v)) return;
    sums[slot] += v;
    ++counts[slot];
  };
  for (const RepeatMetrics& rm : metrics) {
    const MetricsReport& r = rm.report;
    std::map<int, double> recall;
    for (std::size_t i = 0; i < r.accuracy.classes.size(); ++i) {
      recall[r.accuracy.classes[i]] = r.accuracy.classwise[i];
    }
    out << rm.seed << ',' << r.dims << ',' << num(r.accuracy.overall) << ',' << num(r.accuracy.kappa)
        << ',' << num(r.nmi) << ',' << num(r.fisher) << ',' << (r.fisher_rank_deficient ? 1 : 0)
        << ',' << num(r.silhouette);
    add(0, r.accuracy.overall);
    add(1, r.accuracy.kappa);
    add(2, r.nmi);
    add(3, r.fisher);
    add(4, r.silhouette);
    for (std::size_t c = 0; c < classes.size(); ++c) {
      const auto it = recall.find(classes[c]);
      const double v = it == recall.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
      out << ',' << num(v);
      add(5 + c, v);
    }
    out << '\n';
  }
  if (metrics.empty()) return;
  auto mean = [&](std::size_t slot) {
    return counts[slot] ? sums[slot] / static_cast<double>(counts[slot])
                        : std::numeric_limits<double>::quiet_NaN();
  };
  out << "mean," << metrics.front().report.dims << ',' << num(mean(0)) << ',' << num(mean(1)) << ','
      << num(mean(2)) << ',' << num(mean(3)) << ",," << num(mean(4));
  for (std::size_t c = 0; c < classes.size(); ++c) out << ',' << num(mean(5 + c));
  out << '\n';
}

void write_snr(const fs::path& path, const std::vector<SnrRow>& rows) {
  std::ofstream out = open_report(path);
  out << "snr_db,auc,best_oa,best_d,failed_repeats\n";
  for (const SnrRow& r : rows) {
    out << num(r.snr_db) << ',' << num(r.auc) << ',' << num(r.best_accuracy) << ',' << r.best_dims
        << ',' << r.failed_repeats << '\n';
  }
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) out += num(values[i]);
    else out += std::to_string(values[i]);
  }
  return out;
}

void write_manifest(const fs::path& path, const ExperimentConfig& cfg, const LabeledDataset& data,
                    const ExperimentSummary& summary) {
  std::ofstream out = open_report(path);
  out << "hdmrge " << library_version() << '\n';
  out << "dataset = " << cfg.dataset.filename().string() << '\n';
  if (!cfg.ground_truth.empty()) out << "ground_truth = " << cfg.ground_truth.filename().string() << '\n';
  out << "samples = " << data.size() << '\n';
  out << "features = " << data.features() << '\n';
  out << "classes = " << distinct_labels(data.labels).size() << '\n';
  out << "method = " << to_string(cfg.method) << '\n';
  out << "p = " << join(cfg.grid.orders) << '\n';
  out << "beta = " << join(cfg.grid.betas) << '\n';
  out << "k = " << join(cfg.grid.ks) << '\n';
  out << "margin = " << num(cfg.margin) << '\n';
  out << "cv_folds = " << cfg.cv_folds << '\n';
  out << "d_max = " << cfg.d_max << '\n';
  out << "train_fraction = " << num(cfg.train_fraction) << '\n';
  out << "n_repeats = " << cfg.n_repeats << '\n';
  out << "seeds = " << join(cfg.repeat_seeds()) << '\n';
  out << "snr_list = " << join(cfg.snr_list) << '\n';
  out << "best_d = " << summary.best_dims << '\n';
  out << "failed_repeats = " << summary.failed_repeats() << '\n';
  for (const RepeatOutcome& r : summary.repeats) {
    out << "repeat " << r.seed << ": ";
    if (r.ok) {
      out << "ok p=" << r.params.order << " beta=" << num(r.params.beta) << " k=" << r.params.k
          << " dims=" << r.accuracy.size() << '\n';
    } else {
      out << "failed: " << r.error << '\n';
    }
  }
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& config, const LabeledDataset& dataset) {
  config.validate();
  if (dataset.size() == 0) throw DataError("empty dataset");
  if (static_cast<std::size_t>(dataset.samples.rows()) != dataset.size()) {
    throw ShapeError("dataset samples and labels disagree");
  }
  if (config.export_labels && dataset.pixels.size() != dataset.size()) {
    throw ConfigError("export_labels requires a cube dataset with pixel coordinates");
  }

  ExperimentSummary summary;
  std::vector<RepeatData> data;
  std::vector<SplitPlan> plans;
  std::vector<std::vector<double>> oa;
  std::vector<std::vector<double>> kappa;
  std::optional<Error> first_error;

  for (const std::uint64_t seed : config.repeat_seeds()) {
    RepeatOutcome outcome;
    outcome.seed = seed;
    try {
      const SplitPlan plan = stratified_split(dataset.labels, config.train_fraction, seed);
      outcome.params = select_params(config, dataset.samples, dataset.labels, plan, seed);
      RepeatData rd = evaluate_split(config, dataset.samples, dataset.labels, plan, outcome.params);
      for (const Labels& pred : rd.predictions) {
        const AccuracyReport rep = accuracy_kappa(pred, rd.eval_labels);
        outcome.accuracy.push_back(rep.overall);
        outcome.kappa.push_back(rep.kappa);
      }
      outcome.ok = true;
      oa.push_back(outcome.accuracy);
      kappa.push_back(outcome.kappa);
      data.push_back(std::move(rd));
      plans.push_back(plan);
    } catch (const Error& e) {
      outcome.error = e.what();
      outcome.error_kind = e.kind();
      if (!first_error) first_error = e;
    }
    summary.repeats.push_back(std::move(outcome));
  }

  summary.curve = mean_curve(oa, kappa);
  summary.best_dims = best_dims_of(summary.curve);

  const bool write = !config.output_dir.empty();
  if (write) fs::create_directories(config.output_dir);

  if (summary.best_dims > 0) {
    std::size_t slot = 0;
    for (const RepeatOutcome& r : summary.repeats) {
      if (!r.ok) continue;
      const RepeatData& rd = data[slot++];
      const auto bd = static_cast<std::size_t>(summary.best_dims);
      const Labels& pred = rd.predictions[bd - 1];
      summary.best_metrics.push_back(
          {r.seed, evaluate_predictions(rd.eval_embedding.leftCols(summary.best_dims), rd.eval_labels,
                                        pred, mix(r.seed, kClusterStream))});
      if (write && config.export_labels) {
        fs::create_directories(config.output_dir / "labels");
        write_label_map(config.output_dir / "labels" / ("seed_" + std::to_string(r.seed) + ".csv"),
                        dataset, rd.eval_rows, pred);
      }
    }
  }

  for (std::size_t si = 0; si < config.snr_list.size() && !oa.empty(); ++si) {
    SnrRow row;
    row.snr_db = config.snr_list[si];
    std::vector<std::vector<double>> noisy_oa;
    std::size_t slot = 0;
    for (const RepeatOutcome& r : summary.repeats) {
      if (!r.ok) {
        ++row.failed_repeats;
        continue;
      }
      const SplitPlan& plan = plans[slot++];
      try {
        const Matrix noisy = add_noise(dataset.samples, row.snr_db, mix(r.seed, kNoiseStream + si));
        const RepeatData rd = evaluate_split(config, noisy, dataset.labels, plan, r.params);
        std::vector<double> curve;
        for (const Labels& pred : rd.predictions) curve.push_back(accuracy_of(pred, rd.eval_labels));
        noisy_oa.push_back(std::move(curve));
      } catch (const Error&) {
        ++row.failed_repeats;
      }
    }
    const std::vector<CurveRow> curve = mean_curve(noisy_oa, {});
    if (curve.empty()) {
      row.auc = row.best_accuracy = std::numeric_limits<double>::quiet_NaN();
    } else {
      row.auc = curve_auc(curve);
      row.best_dims = best_dims_of(curve);
      row.best_accuracy = curve[static_cast<std::size_t>(row.best_dims - 1)].mean_accuracy;
    }
    summary.snr.push_back(row);
  }

  if (write) {
    write_curve(config.output_dir / "learning_curve.csv", summary.curve);
    write_metrics(config.output_dir / "metrics.csv", summary.best_metrics,
                  distinct_labels(dataset.labels));
    if (!config.snr_list.empty()) write_snr(config.output_dir / "snr.csv", summary.snr);
    write_manifest(config.output_dir / "manifest.txt", config, dataset, summary);
  }

  if (oa.empty() && first_error) {
    rethrow_as(first_error->kind(), "all repeats failed; first error: " + std::string(first_error->what()));
  }
  return summary;
}

ExperimentSummary run_experiment(const ExperimentConfig& config) {
  if (config.dataset.empty()) throw ConfigError("config has no dataset");
  LabeledDataset data;
  if (!config.ground_truth.empty()) {
    data = load_hsi_cube(config.dataset, config.ground_truth);
  } else {
    CsvOptions opts;
    opts.label_column = config.label_column;
    opts.header = config.csv_header;
    data = load_matrix_csv(config.dataset, opts);
  }
  return run_experiment(config, data);
}

}  // namespace hdmrge
