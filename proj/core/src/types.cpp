#include "hdmrge/types.hpp"

#include <algorithm>

namespace hdmrge {

std::string_view library_version() noexcept { return HDMRGE_VERSION_STRING; }

std::vector<int> distinct_labels(const Labels& labels) {
  std::vector<int> out(labels.begin(), labels.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Standardizer Standardizer::fit(const Matrix& samples) {
  Standardizer s;
  const auto m = static_cast<double>(samples.rows());
  s.mean = samples.colwise().mean().transpose();
  s.scale = Vector::Ones(samples.cols());
  if (samples.rows() == 0) return s;
  for (Eigen::Index j = 0; j < samples.cols(); ++j) {
    const double var = (samples.col(j).array() - s.mean(j)).square().sum() / m;
    if (var > 0.0) s.scale(j) = std::sqrt(var);
  }
  return s;
}

Matrix Standardizer::apply(const Matrix& samples) const {
  Matrix out = samples.rowwise() - mean.transpose();
  return out.array().rowwise() / scale.transpose().array();
}

}  // namespace hdmrge
