#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <string_view>
#include <vector>

namespace hdmrge {

/// Library version, "major.minor.patch".
std::string_view library_version() noexcept;

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Integer class label per sample.
using Labels = std::vector<int>;

/// Sorted distinct labels.
std::vector<int> distinct_labels(const Labels& labels);

/// Per-feature zero-mean / unit-variance scaling, frozen from a training set.
/// Constant features keep scale 1 so they map to zero.
struct Standardizer {
  Vector mean;
  Vector scale;

  static Standardizer fit(const Matrix& samples);
  Matrix apply(const Matrix& samples) const;
};

}  // namespace hdmrge
