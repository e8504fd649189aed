#include "hdmrge/cli.hpp"

#include "hdmrge/dataset.hpp"
#include "hdmrge/embedding.hpp"
#include "hdmrge/error.hpp"
#include "hdmrge/experiment.hpp"
#include "hdmrge/metrics.hpp"
#include "hdmrge/model_io.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace hdmrge {

namespace {

namespace fs = std::filesystem;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct FitArgs {
  std::string data;
  int label_column = -1;
  bool header = false;
  std::string method = "hdmr";
  HdmrParams params;
  std::string out;
  std::string embedding;
};

struct TransformArgs {
  std::string model;
  std::string data;
  bool labeled = false;
  int label_column = -1;
  bool header = false;
  std::string out;
};

struct EvaluateArgs {
  std::string embedding;
  std::string reference;
  std::uint64_t seed = 0;
  std::string out;
};

struct ExperimentArgs {
  std::string config;
  std::string method;
  std::vector<int> p;
  std::vector<double> beta;
  std::vector<int> k;
  int d = 0;
  double train_fraction = 0.0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> snr;
  std::string out;
};

int run_fit(const FitArgs& a, std::ostream& out) {
  const Method method = parse_method(a.method);
  if (method == Method::direct) {
    throw ParameterError("the direct method has no out-of-sample model; use experiment");
  }
  CsvOptions opts;
  opts.label_column = a.label_column;
  opts.header = a.header;
  const LabeledDataset data = load_matrix_csv(a.data, opts);
  const EmbeddingKind kind = method == Method::hdmr ? EmbeddingKind::hdmr : EmbeddingKind::lpp;
  const FitResult fr = fit(kind, data.samples, data.labels, a.params);
  save_model(fr.model, fs::path(a.out));
  if (!a.embedding.empty()) write_features_csv(a.embedding, fr.embedding, &data.labels);
  out << "fitted " << to_string(kind) << " model: " << data.size() << " samples, "
      << data.features() << " features, d = " << fr.model.dims() << " -> " << a.out << '\n';
  return 0;
}

int run_transform(const TransformArgs& a, std::ostream& out) {
  const EmbeddingModel model = load_model(fs::path(a.model));
  if (a.labeled) {
    CsvOptions opts;
    opts.label_column = a.label_column;
    opts.header = a.header;
    const LabeledDataset data = load_matrix_csv(a.data, opts);
    write_features_csv(a.out, transform(model, data.samples), &data.labels);
    out << "embedded " << data.size() << " samples -> " << a.out << '\n';
  } else {
    const Matrix x = load_features_csv(a.data, a.header);
    write_features_csv(a.out, transform(model, x));
    out << "embedded " << x.rows() << " samples -> " << a.out << '\n';
  }
  return 0;
}

int run_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const LabeledDataset emb = load_matrix_csv(a.embedding);
  Labels predicted;
  if (!a.reference.empty()) {
    const LabeledDataset ref = load_matrix_csv(a.reference);
    predicted = knn_predict(ref.samples, ref.labels, emb.samples, 1);
  } else {
    predicted = nn_predict_by_prefix(emb.samples, emb.labels, emb.samples,
                                     static_cast<int>(emb.samples.cols()), true)
                    .back();
  }
  const MetricsReport r = evaluate_predictions(emb.samples, emb.labels, predicted, a.seed);

  std::ofstream file;
  std::ostream* sink = &out;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw DataError("cannot write " + a.out);
    sink = &file;
  }
  *sink << "d,oa,kappa,nmi,fisher,fisher_rank_deficient,silhouette";
  for (const int c : r.accuracy.classes) *sink << ",class_" << c;
  *sink << '\n'
        << r.dims << ',' << num(r.accuracy.overall) << ',' << num(r.accuracy.kappa) << ','
        << num(r.nmi) << ',' << num(r.fisher) << ',' << (r.fisher_rank_deficient ? 1 : 0) << ','
        << num(r.silhouette);
  for (const double v : r.accuracy.classwise) *sink << ',' << num(v);
  *sink << '\n';
  return 0;
}

int run_experiment_cmd(const ExperimentArgs& a, const CLI::App& sub, std::ostream& out) {
  ExperimentConfig cfg = load_config(a.config);
  if (sub.count("--method")) cfg.method = parse_method(a.method);
  if (sub.count("--p")) cfg.grid.orders = a.p;
  if (sub.count("--beta")) cfg.grid.betas = a.beta;
  if (sub.count("--k")) cfg.grid.ks = a.k;
  if (sub.count("--d")) cfg.d_max = a.d;
  if (sub.count("--train-fraction")) cfg.train_fraction = a.train_fraction;
  if (sub.count("--seeds")) {
    cfg.seeds = a.seeds;
    cfg.n_repeats = static_cast<int>(a.seeds.size());
  }
  if (sub.count("--snr")) cfg.snr_list = a.snr;
  if (sub.count("--out")) cfg.output_dir = a.out;
  cfg.validate();

  const ExperimentSummary s = run_experiment(cfg);
  out << "repeats: " << s.repeats.size() - s.failed_repeats() << " ok, " << s.failed_repeats()
      << " failed\n";
  if (s.best_dims > 0) {
    const CurveRow& row = s.curve[static_cast<std::size_t>(s.best_dims - 1)];
    out << "best d = " << s.best_dims << ": mean OA " << num(row.mean_accuracy) << " (std "
        << num(row.std_accuracy) << "), mean kappa " << num(row.mean_kappa) << '\n';
  }
  for (const RepeatOutcome& r : s.repeats) {
    if (!r.ok) out << "repeat " << r.seed << " failed: " << r.error << '\n';
  }
  for (const SnrRow& row : s.snr) {
    out << "snr " << num(row.snr_db) << " dB: AUC " << num(row.auc) << ", best OA "
        << num(row.best_accuracy) << " at d = " << row.best_dims << '\n';
  }
  if (!cfg.output_dir.empty()) out << "reports written to " << cfg.output_dir.string() << '\n';
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph embedding with first-order HDMR feature maps", "hdmrge"};
  app.set_version_flag("--version", std::string(library_version()));
  app.require_subcommand(1);

  FitArgs fa;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a model on a labeled CSV and save it");
  fit_cmd->add_option("--data", fa.data, "Labeled CSV")->required();
  fit_cmd->add_option("--label-column", fa.label_column, "Label column (negative counts from the end)");
  fit_cmd->add_flag("--header", fa.header, "Skip the first CSV row");
  fit_cmd->add_option("--method", fa.method, "hdmr or lpp")->capture_default_str();
  fit_cmd->add_option("--p", fa.params.order, "Polynomial order")->capture_default_str();
  fit_cmd->add_option("--beta", fa.params.beta, "Coefficient ridge")->capture_default_str();
  fit_cmd->add_option("--k", fa.params.k, "Graph neighbors")->capture_default_str();
  fit_cmd->add_option("--d", fa.params.dims, "Embedding dimension")->capture_default_str();
  fit_cmd->add_option("--margin", fa.params.margin, "Basis range padding")->capture_default_str();
  fit_cmd->add_option("--out", fa.out, "Model file")->required();
  fit_cmd->add_option("--embedding", fa.embedding, "Also write the training embedding CSV");

  TransformArgs ta;
  auto* tr_cmd = app.add_subcommand("transform", "Embed samples with a saved model");
  tr_cmd->add_option("--model", ta.model, "Model file")->required();
  tr_cmd->add_option("--data", ta.data, "Feature CSV")->required();
  tr_cmd->add_flag("--labeled", ta.labeled, "Input has a label column; copy it to the output");
  tr_cmd->add_option("--label-column", ta.label_column, "Label column with --labeled");
  tr_cmd->add_flag("--header", ta.header, "Skip the first CSV row");
  tr_cmd->add_option("--out", ta.out, "Embedding CSV")->required();

  EvaluateArgs ea;
  auto* ev_cmd = app.add_subcommand("evaluate", "Metrics of a labeled embedding CSV");
  ev_cmd->add_option("--embedding", ea.embedding, "Labeled embedding CSV to score")->required();
  ev_cmd->add_option("--reference", ea.reference,
                     "Labeled training embedding for 1-NN; leave-one-out when omitted");
  ev_cmd->add_option("--seed", ea.seed, "k-means seed")->capture_default_str();
  ev_cmd->add_option("--out", ea.out, "Metrics CSV (stdout when omitted)");

  ExperimentArgs xa;
  auto* ex_cmd = app.add_subcommand("experiment", "Run the repeated split protocol from a config");
  ex_cmd->add_option("--config", xa.config, "Config file")->required();
  ex_cmd->add_option("--method", xa.method, "hdmr, lpp or direct");
  ex_cmd->add_option("--p", xa.p, "Order grid")->delimiter(',');
  ex_cmd->add_option("--beta", xa.beta, "Beta grid")->delimiter(',');
  ex_cmd->add_option("--k", xa.k, "k grid")->delimiter(',');
  ex_cmd->add_option("--d", xa.d, "Maximum embedding dimension");
  ex_cmd->add_option("--train-fraction", xa.train_fraction, "Per-class training fraction");
  ex_cmd->add_option("--seeds", xa.seeds, "Repeat seeds")->delimiter(',');
  ex_cmd->add_option("--snr", xa.snr, "SNR sweep in dB")->delimiter(',');
  ex_cmd->add_option("--out", xa.out, "Report directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*fit_cmd) return run_fit(fa, out);
    if (*tr_cmd) return run_transform(ta, out);
    if (*ev_cmd) return run_evaluate(ea, out);
    return run_experiment_cmd(xa, *ex_cmd, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace hdmrge
