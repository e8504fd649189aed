#include "hdmrge/basis.hpp"

#include "hdmrge/error.hpp"

#include <array>
#include <cmath>
#include <string>

namespace hdmrge {

double legendre(int degree, double t, int max_degree) {
  if (degree < 0 || degree > max_degree) {
    throw ConfigError("Legendre degree " + std::to_string(degree) + " outside [0, " +
                      std::to_string(max_degree) + "]");
  }
  if (degree == 0) return 1.0;
  double prev = 1.0;
  double cur = t;
  for (int n = 1; n < degree; ++n) {
    const double next = ((2.0 * n + 1.0) * t * cur - n * prev) / (n + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

void legendre_sequence(double t, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = t;
  for (std::size_t n = 1; n + 1 < out.size(); ++n) {
    const double nd = static_cast<double>(n);
    out[n + 1] = ((2.0 * nd + 1.0) * t * out[n] - nd * out[n - 1]) / (nd + 1.0);
  }
}

void BasisSpec::validate() const {
  if (order < 1 || order > kMaxLegendreDegree) {
    throw ConfigError("polynomial order " + std::to_string(order) + " outside [1, " +
                      std::to_string(kMaxLegendreDegree) + "]");
  }
  if (!(margin >= 0.0)) throw ConfigError("basis margin must be nonnegative");
  for (std::size_t j = 0; j < ranges.size(); ++j) {
    const auto& r = ranges[j];
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.lo < r.hi)) {
      throw ConfigError("invalid interval for feature " + std::to_string(j));
    }
  }
}

std::vector<Interval> fit_ranges(const Matrix& samples, double margin) {
  if (samples.rows() < 2) throw DataError("fitting basis ranges needs at least 2 samples");
  if (!(margin >= 0.0)) throw ConfigError("basis margin must be nonnegative");
  if (!samples.allFinite()) throw DataError("non-finite value in basis training data");

  std::vector<Interval> ranges(static_cast<std::size_t>(samples.cols()));
  for (Eigen::Index j = 0; j < samples.cols(); ++j) {
    const double lo = samples.col(j).minCoeff();
    const double hi = samples.col(j).maxCoeff();
    const double range = hi - lo;
    auto& r = ranges[static_cast<std::size_t>(j)];
    if (range == 0.0) {
      r = {lo - 1.0, lo + 1.0};
    } else {
      r = {lo - margin * range, hi + margin * range};
    }
  }
  return ranges;
}

BasisSpec fit_basis(const Matrix& samples, int order, double margin) {
  BasisSpec spec;
  spec.order = order;
  spec.margin = margin;
  spec.ranges = fit_ranges(samples, margin);
  spec.validate();
  return spec;
}

namespace {

// Writes phi_1..phi_p of one feature value into out[0..p).
void phi_feature(const Interval& r, int order, double x, double* out) {
  std::array<double, kMaxLegendreDegree + 1> p{};
  const double width = r.width();
  const double y = 2.0 * (x - r.hi) / width + 1.0;
  legendre_sequence(y, std::span<double>(p.data(), static_cast<std::size_t>(order) + 1));
  for (int q = 1; q <= order; ++q) {
    out[q - 1] = std::sqrt((2.0 * q + 1.0) / width) * p[static_cast<std::size_t>(q)];
  }
}

}  // namespace

Vector phi_point(const BasisSpec& spec, const Eigen::Ref<const Vector>& x,
                 BasisDiagnostics* diagnostics) {
  if (static_cast<std::size_t>(x.size()) != spec.features()) {
    throw ShapeError("sample has " + std::to_string(x.size()) + " features, basis expects " +
                     std::to_string(spec.features()));
  }
  Vector out(static_cast<Eigen::Index>(spec.dimension()));
  for (std::size_t j = 0; j < spec.features(); ++j) {
    const double v = x(static_cast<Eigen::Index>(j));
    if (diagnostics && !spec.ranges[j].contains(v)) ++diagnostics->out_of_range;
    phi_feature(spec.ranges[j], spec.order, v, out.data() + j * spec.order);
  }
  return out;
}

Matrix expand(const BasisSpec& spec, const Matrix& samples, BasisDiagnostics* diagnostics) {
  if (static_cast<std::size_t>(samples.cols()) != spec.features()) {
    throw ShapeError("samples have " + std::to_string(samples.cols()) +
                     " features, basis expects " + std::to_string(spec.features()));
  }
  const auto p = static_cast<std::size_t>(spec.order);
  Matrix phi(static_cast<Eigen::Index>(spec.dimension()), samples.rows());
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    double* column = phi.col(i).data();
    for (std::size_t j = 0; j < spec.features(); ++j) {
      const double v = samples(i, static_cast<Eigen::Index>(j));
      if (diagnostics && !spec.ranges[j].contains(v)) ++diagnostics->out_of_range;
      phi_feature(spec.ranges[j], spec.order, v, column + j * p);
    }
  }
  return phi;
}

}  // namespace hdmrge
