#pragma once

#include "hdmrge/cross_validation.hpp"
#include "hdmrge/dataset.hpp"
#include "hdmrge/error.hpp"
#include "hdmrge/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace hdmrge {

enum class Method { hdmr, lpp, direct };

std::string_view to_string(Method method);
Method parse_method(std::string_view text);

struct ExperimentConfig {
  std::filesystem::path dataset;       // CSV, or cube when ground_truth is set
  std::filesystem::path ground_truth;
  int label_column = -1;
  bool csv_header = false;

  Method method = Method::hdmr;
  ParamGrid grid;
  double margin = 0.05;
  int cv_folds = 5;

  int d_max = 50;
  double train_fraction = 0.10;
  int n_repeats = 10;
  std::vector<std::uint64_t> seeds;  // empty = 0..n_repeats-1
  std::vector<double> snr_list;      // dB; empty = no sweep
  bool export_labels = false;        // per-repeat predicted label maps

  std::filesystem::path output_dir;

  void validate() const;
  /// Seeds actually used, one per repeat.
  std::vector<std::uint64_t> repeat_seeds() const;
};

/// Flat "key = value" text; '#' starts a comment; lists are comma separated.
/// Keys: dataset, ground_truth, label_column, csv_header, method, p, beta, k,
/// margin, cv_folds, d_max, train_fraction, n_repeats, seeds, snr_list,
/// export_labels, output_dir. Relative paths resolve against base_dir.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

struct RepeatOutcome {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  ErrorKind error_kind = ErrorKind::data;
  HdmrParams params;                // selected by CV (or the single grid point)
  std::vector<double> accuracy;     // OA at d = 1..available
  std::vector<double> kappa;        // kappa at d = 1..available
};

struct CurveRow {
  int dims = 0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  double mean_kappa = 0.0;
};

struct RepeatMetrics {
  std::uint64_t seed = 0;
  MetricsReport report;
};

struct SnrRow {
  double snr_db = 0.0;
  double auc = 0.0;
  double best_accuracy = 0.0;
  int best_dims = 0;
  std::size_t failed_repeats = 0;
};

struct ExperimentSummary {
  std::vector<RepeatOutcome> repeats;
  std::vector<CurveRow> curve;
  int best_dims = 0;
  std::vector<RepeatMetrics> best_metrics;
  std::vector<SnrRow> snr;

  std::size_t failed_repeats() const;
};

/// Runs the full protocol on an in-memory dataset. Writes report files when
/// config.output_dir is set. Failed repeats are recorded; if every repeat
/// fails the first failure is rethrown after the manifest is written.
/// The direct method has no out-of-sample map; it is scored by
/// leave-one-out 1-NN on the training embedding.
ExperimentSummary run_experiment(const ExperimentConfig& config, const LabeledDataset& dataset);

/// Loads config.dataset and runs.
ExperimentSummary run_experiment(const ExperimentConfig& config);

/// Learning-curve AUC computed from a summary curve.
double curve_auc(const std::vector<CurveRow>& curve);

}  // namespace hdmrge
