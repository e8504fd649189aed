#pragma once

#include "hdmrge/types.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace hdmrge {

struct PixelCoord {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
};

struct LabeledDataset {
  Matrix samples;  // m x n
  Labels labels;   // m, positive
  /// Source pixel of each row when loaded from a cube; empty otherwise.
  std::vector<PixelCoord> pixels;
  std::uint32_t image_rows = 0;
  std::uint32_t image_cols = 0;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t features() const noexcept { return static_cast<std::size_t>(samples.cols()); }

  LabeledDataset subset(const std::vector<std::size_t>& rows) const;
};

struct CsvOptions {
  /// Label column index; negative counts from the end (-1 = last).
  int label_column = -1;
  bool header = false;
};

/// Rectangular numeric CSV. Rejects ragged rows, non-numeric or non-finite
/// cells and non-positive labels with a ParseError carrying row/column.
LabeledDataset load_matrix_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Unlabeled numeric CSV (every column is a feature).
Matrix load_features_csv(const std::filesystem::path& path, bool header = false);

/// Writes features then the label as the last column, full precision.
void write_matrix_csv(const std::filesystem::path& path, const LabeledDataset& dataset);
void write_features_csv(const std::filesystem::path& path, const Matrix& values,
                        const Labels* labels = nullptr);

/// Cube file: three ASCII header lines (rows, cols, bands) followed by
/// band-sequential little-endian float32 samples.
/// Ground truth file: two ASCII header lines (rows, cols) followed by
/// row-major little-endian uint16 labels; 0 marks unlabeled pixels.
LabeledDataset load_hsi_cube(const std::filesystem::path& data_path,
                             const std::filesystem::path& ground_truth_path);

void write_hsi_cube(const std::filesystem::path& data_path,
                    const std::filesystem::path& ground_truth_path, std::uint32_t rows,
                    std::uint32_t cols, std::uint32_t bands, const std::vector<float>& bsq,
                    const std::vector<std::uint16_t>& ground_truth);

/// Writes "row,col,label" for every pixel of a cube-backed dataset.
void write_label_map(const std::filesystem::path& path, const LabeledDataset& reference,
                     const std::vector<std::size_t>& rows, const Labels& predicted);

}  // namespace hdmrge
