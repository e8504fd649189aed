#include "hdmrge/model_io.hpp"

#include "hdmrge/error.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace hdmrge {

namespace {

constexpr const char* kMagic = "hdmrge-model";

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_values(std::ostream& out, const double* data, Eigen::Index count) {
  for (Eigen::Index i = 0; i < count; ++i) {
    if (i) out << ' ';
    out << format_double(data[i]);
  }
  if (count) out << '\n';
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string token() {
    std::string t;
    if (!(in_ >> t)) throw FormatError("model file ended unexpectedly");
    return t;
  }

  void expect(const std::string& keyword) {
    const std::string t = token();
    if (t != keyword) throw FormatError("model file: expected '" + keyword + "', found '" + t + "'");
  }

  double real() {
    const std::string t = token();
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
      throw FormatError("model file: bad number '" + t + "'");
    }
    return v;
  }

  long integer() {
    const std::string t = token();
    long v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size() || v < 0) {
      throw FormatError("model file: bad count '" + t + "'");
    }
    return v;
  }

  long keyed_integer(const std::string& keyword) {
    expect(keyword);
    return integer();
  }

  Vector values(long count) {
    Vector v(count);
    for (long i = 0; i < count; ++i) v(i) = real();
    return v;
  }

 private:
  std::istream& in_;
};

}  // namespace

void save_model(const EmbeddingModel& model, std::ostream& out) {
  const bool hdmr = model.kind == EmbeddingKind::hdmr;
  const auto n = static_cast<Eigen::Index>(model.features());
  out << kMagic << ' ' << kModelFormatVersion << '\n';
  out << "kind " << to_string(model.kind) << '\n';
  out << "features " << n << '\n';
  out << "order " << (hdmr ? model.basis.order : 1) << '\n';
  out << "dims " << model.alpha.cols() << '\n';
  out << "margin " << format_double(hdmr ? model.basis.margin : 0.0) << '\n';

  out << "ranges " << (hdmr ? n : 0) << '\n';
  if (hdmr) {
    for (const auto& r : model.basis.ranges) {
      out << format_double(r.lo) << ' ' << format_double(r.hi) << '\n';
    }
  }
  const Eigen::Index stats = hdmr ? 0 : n;
  out << "mean " << stats << '\n';
  if (!hdmr) write_values(out, model.scaling.mean.data(), n);
  out << "scale " << stats << '\n';
  if (!hdmr) write_values(out, model.scaling.scale.data(), n);

  out << "eigenvalues " << model.eigenvalues.size() << '\n';
  write_values(out, model.eigenvalues.data(), model.eigenvalues.size());
  out << "alpha " << model.alpha.rows() << ' ' << model.alpha.cols() << '\n';
  for (Eigen::Index c = 0; c < model.alpha.cols(); ++c) {
    write_values(out, model.alpha.col(c).data(), model.alpha.rows());
  }
  out << "end\n";
  if (!out) throw DataError("failed writing model");
}

void save_model(const EmbeddingModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  save_model(model, out);
}

EmbeddingModel load_model(std::istream& in) {
  Reader r(in);
  r.expect(kMagic);
  const long version = r.integer();
  if (version != kModelFormatVersion) {
    throw FormatError("unsupported model format version " + std::to_string(version));
  }
  EmbeddingModel model;
  r.expect("kind");
  try {
    model.kind = parse_embedding_kind(r.token());
  } catch (const ConfigError& e) {
    throw FormatError(std::string("model file: ") + e.what());
  }
  const long n = r.keyed_integer("features");
  const long order = r.keyed_integer("order");
  const long dims = r.keyed_integer("dims");
  r.expect("margin");
  const double margin = r.real();

  const long nranges = r.keyed_integer("ranges");
  std::vector<Interval> ranges(static_cast<std::size_t>(nranges));
  for (auto& iv : ranges) {
    iv.lo = r.real();
    iv.hi = r.real();
  }
  const Vector mean = r.values(r.keyed_integer("mean"));
  const Vector scale = r.values(r.keyed_integer("scale"));
  model.eigenvalues = r.values(r.keyed_integer("eigenvalues"));
  const long rows = r.keyed_integer("alpha");
  const long cols = r.integer();
  model.alpha.resize(rows, cols);
  for (long c = 0; c < cols; ++c) {
    for (long i = 0; i < rows; ++i) model.alpha(i, c) = r.real();
  }
  r.expect("end");

  if (cols != dims || model.eigenvalues.size() != dims) {
    throw FormatError("model file: dims do not match alpha/eigenvalues");
  }
  if (model.kind == EmbeddingKind::hdmr) {
    model.basis.order = static_cast<int>(order);
    model.basis.margin = margin;
    model.basis.ranges = std::move(ranges);
    if (nranges != n || rows != n * order) throw FormatError("model file: inconsistent hdmr shape");
    try {
      model.basis.validate();
    } catch (const ConfigError& e) {
      throw FormatError(std::string("model file: ") + e.what());
    }
  } else {
    if (mean.size() != n || scale.size() != n || rows != n) {
      throw FormatError("model file: inconsistent lpp shape");
    }
    model.scaling.mean = mean;
    model.scaling.scale = scale;
  }
  return model;
}

EmbeddingModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model " + path.string());
  return load_model(in);
}

}  // namespace hdmrge
