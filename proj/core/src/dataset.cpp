#include "hdmrge/dataset.hpp"

#include "hdmrge/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

namespace hdmrge {

namespace fs = std::filesystem;

LabeledDataset LabeledDataset::subset(const std::vector<std::size_t>& rows) const {
  LabeledDataset out;
  out.samples.resize(static_cast<Eigen::Index>(rows.size()), samples.cols());
  out.labels.reserve(rows.size());
  out.image_rows = image_rows;
  out.image_cols = image_cols;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= size()) throw ShapeError("subset: row index out of range");
    out.samples.row(static_cast<Eigen::Index>(i)) = samples.row(static_cast<Eigen::Index>(rows[i]));
    out.labels.push_back(labels[rows[i]]);
    if (!pixels.empty()) out.pixels.push_back(pixels[rows[i]]);
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool blank(std::string_view line) { return trim(line).empty(); }

std::vector<double> parse_row(std::string_view line, std::size_t row) {
  std::vector<double> cells;
  std::size_t column = 0;
  while (true) {
    const auto comma = line.find(',');
    std::string_view cell = trim(line.substr(0, comma));
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (cell.empty() || ec != std::errc() || end != cell.data() + cell.size()) {
      throw ParseError("non-numeric cell '" + std::string(cell) + "'", row, column);
    }
    if (!std::isfinite(value)) throw ParseError("non-finite cell", row, column);
    cells.push_back(value);
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
    ++column;
  }
  return cells;
}

struct Table {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> line_numbers;
};

Table read_table(const fs::path& path, bool header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  Table table;
  std::string line;
  std::size_t line_no = 0;
  bool skipped = !header;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    if (!skipped) {
      skipped = true;
      continue;
    }
    auto cells = parse_row(line, line_no);
    if (!table.rows.empty() && cells.size() != table.rows.front().size()) {
      throw ParseError("expected " + std::to_string(table.rows.front().size()) + " columns, found " +
                           std::to_string(cells.size()),
                       line_no, cells.size() - 1);
    }
    table.rows.push_back(std::move(cells));
    table.line_numbers.push_back(line_no);
  }
  if (table.rows.empty()) throw DataError(path.string() + ": no data rows");
  return table;
}

void write_double(std::ostream& out, double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.write(buf.data(), res.ptr - buf.data());
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, mode);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

}  // namespace

LabeledDataset load_matrix_csv(const fs::path& path, const CsvOptions& options) {
  const Table table = read_table(path, options.header);
  const auto width = static_cast<int>(table.rows.front().size());
  if (width < 2) throw DataError(path.string() + ": need at least one feature and a label column");
  const int label_col = options.label_column < 0 ? width + options.label_column : options.label_column;
  if (label_col < 0 || label_col >= width) {
    throw ConfigError("label column " + std::to_string(options.label_column) + " out of range for " +
                      std::to_string(width) + " columns");
  }

  LabeledDataset out;
  out.samples.resize(static_cast<Eigen::Index>(table.rows.size()), width - 1);
  out.labels.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& cells = table.rows[i];
    const double lab = cells[static_cast<std::size_t>(label_col)];
    if (lab != std::floor(lab) || lab < 1.0 || lab > 2147483647.0) {
      throw ParseError("label must be a positive integer", table.line_numbers[i],
                       static_cast<std::size_t>(label_col));
    }
    out.labels.push_back(static_cast<int>(lab));
    Eigen::Index c = 0;
    for (int j = 0; j < width; ++j) {
      if (j != label_col) out.samples(static_cast<Eigen::Index>(i), c++) = cells[static_cast<std::size_t>(j)];
    }
  }
  return out;
}

Matrix load_features_csv(const fs::path& path, bool header) {
  const Table table = read_table(path, header);
  Matrix out(static_cast<Eigen::Index>(table.rows.size()),
             static_cast<Eigen::Index>(table.rows.front().size()));
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    for (std::size_t j = 0; j < table.rows[i].size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = table.rows[i][j];
    }
  }
  return out;
}

void write_features_csv(const fs::path& path, const Matrix& values, const Labels* labels) {
  if (labels != nullptr && labels->size() != static_cast<std::size_t>(values.rows())) {
    throw ShapeError("write_features_csv: label count mismatch");
  }
  std::ofstream out = open_out(path);
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j > 0) out << ',';
      write_double(out, values(i, j));
    }
    if (labels != nullptr) out << ',' << (*labels)[static_cast<std::size_t>(i)];
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

void write_matrix_csv(const fs::path& path, const LabeledDataset& dataset) {
  write_features_csv(path, dataset.samples, &dataset.labels);
}

namespace {

std::vector<std::uint64_t> read_header(std::istream& in, int count, const fs::path& path) {
  std::vector<std::uint64_t> out;
  std::string line;
  for (int i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw FormatError(path.string() + ": truncated header");
    const std::string_view t = trim(line);
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || end != t.data() + t.size() || v == 0) {
      throw FormatError(path.string() + ": bad header line " + std::to_string(i + 1));
    }
    out.push_back(v);
  }
  return out;
}

template <typename T>
std::vector<T> read_le(std::istream& in, std::size_t count, const fs::path& path) {
  std::vector<unsigned char> raw(count * sizeof(T));
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
    throw FormatError(path.string() + ": payload shorter than header declares");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError(path.string() + ": trailing bytes after payload");
  }
  std::vector<T> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) {
      bits |= static_cast<std::uint64_t>(raw[i * sizeof(T) + b]) << (8 * b);
    }
    if constexpr (std::is_same_v<T, float>) {
      const auto u = static_cast<std::uint32_t>(bits);
      std::memcpy(&out[i], &u, sizeof(float));
    } else {
      out[i] = static_cast<T>(bits);
    }
  }
  return out;
}

template <typename T>
void write_le(std::ostream& out, const std::vector<T>& values) {
  std::vector<unsigned char> raw(values.size() * sizeof(T));
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t bits = 0;
    if constexpr (std::is_same_v<T, float>) {
      std::uint32_t u = 0;
      std::memcpy(&u, &values[i], sizeof(float));
      bits = u;
    } else {
      bits = values[i];
    }
    for (std::size_t b = 0; b < sizeof(T); ++b) {
      raw[i * sizeof(T) + b] = static_cast<unsigned char>(bits >> (8 * b));
    }
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

}  // namespace

LabeledDataset load_hsi_cube(const fs::path& data_path, const fs::path& ground_truth_path) {
  std::ifstream data(data_path, std::ios::binary);
  if (!data) throw DataError("cannot open " + data_path.string());
  std::ifstream gt(ground_truth_path, std::ios::binary);
  if (!gt) throw DataError("cannot open " + ground_truth_path.string());

  const auto dh = read_header(data, 3, data_path);
  const auto gh = read_header(gt, 2, ground_truth_path);
  if (dh[0] != gh[0] || dh[1] != gh[1]) {
    throw FormatError("cube is " + std::to_string(dh[0]) + "x" + std::to_string(dh[1]) +
                      " but ground truth is " + std::to_string(gh[0]) + "x" + std::to_string(gh[1]));
  }
  const std::size_t rows = dh[0];
  const std::size_t cols = dh[1];
  const std::size_t bands = dh[2];
  const std::size_t pixels = rows * cols;
  const auto cube = read_le<float>(data, pixels * bands, data_path);
  const auto labels = read_le<std::uint16_t>(gt, pixels, ground_truth_path);

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < pixels; ++i) {
    if (labels[i] != 0) keep.push_back(i);
  }
  if (keep.empty()) throw DataError(ground_truth_path.string() + ": no labeled pixels");

  LabeledDataset out;
  out.image_rows = static_cast<std::uint32_t>(rows);
  out.image_cols = static_cast<std::uint32_t>(cols);
  out.samples.resize(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(bands));
  for (std::size_t s = 0; s < keep.size(); ++s) {
    const std::size_t px = keep[s];
    for (std::size_t b = 0; b < bands; ++b) {
      const float v = cube[b * pixels + px];
      if (!std::isfinite(v)) throw DataError(data_path.string() + ": non-finite sample");
      out.samples(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(b)) = v;
    }
    out.labels.push_back(labels[px]);
    out.pixels.push_back({static_cast<std::uint32_t>(px / cols), static_cast<std::uint32_t>(px % cols)});
  }
  return out;
}

void write_hsi_cube(const fs::path& data_path, const fs::path& ground_truth_path,
                    std::uint32_t rows, std::uint32_t cols, std::uint32_t bands,
                    const std::vector<float>& bsq, const std::vector<std::uint16_t>& ground_truth) {
  const std::size_t pixels = static_cast<std::size_t>(rows) * cols;
  if (bsq.size() != pixels * bands || ground_truth.size() != pixels) {
    throw ShapeError("write_hsi_cube: payload size does not match dimensions");
  }
  {
    std::ofstream out = open_out(data_path, std::ios::binary);
    out << rows << '\n' << cols << '\n' << bands << '\n';
    write_le(out, bsq);
  }
  std::ofstream out = open_out(ground_truth_path, std::ios::binary);
  out << rows << '\n' << cols << '\n';
  write_le(out, ground_truth);
}

void write_label_map(const fs::path& path, const LabeledDataset& reference,
                     const std::vector<std::size_t>& rows, const Labels& predicted) {
  if (reference.pixels.size() != reference.size()) {
    throw DataError("label maps need a cube-backed dataset");
  }
  if (rows.size() != predicted.size()) throw ShapeError("write_label_map: length mismatch");
  std::ofstream out = open_out(path);
  out << "row,col,label\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const PixelCoord& px = reference.pixels.at(rows[i]);
    out << px.row << ',' << px.col << ',' << predicted[i] << '\n';
  }
}

}  // namespace hdmrge
