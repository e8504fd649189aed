#pragma once

#include "hdmrge/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace hdmrge {

inline constexpr int kMaxLegendreDegree = 32;

/// Legendre polynomial P_degree(t) by the Bonnet recurrence
/// (n+1) P_{n+1} = (2n+1) t P_n - n P_{n-1}.
/// Throws ConfigError when degree is negative or above max_degree.
double legendre(int degree, double t, int max_degree = kMaxLegendreDegree);

/// Fills out[q] = P_q(t) for q = 0..out.size()-1 in a single recurrence pass.
void legendre_sequence(double t, std::span<double> out);

struct Interval {
  double lo = -1.0;
  double hi = 1.0;

  double width() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

/// Orthonormal shifted/scaled Legendre feature map. Feature j with value x
/// contributes phi_q(x) = sqrt((2q+1)/(b-a)) * P_q(2(x-b)/(b-a) + 1) for
/// q = 1..order; the constant term is not part of the map.
struct BasisSpec {
  int order = 4;
  std::vector<Interval> ranges;
  double margin = 0.05;

  std::size_t features() const noexcept { return ranges.size(); }
  /// Length of a mapped vector, n * p.
  std::size_t dimension() const noexcept { return ranges.size() * static_cast<std::size_t>(order); }

  void validate() const;
};

/// Counts inputs that fell outside their fitted interval. Such inputs are
/// extrapolated, never clamped.
struct BasisDiagnostics {
  std::size_t out_of_range = 0;
};

/// Per-feature [min - margin*range, max + margin*range]; a constant feature
/// gets [min - 1, min + 1].
std::vector<Interval> fit_ranges(const Matrix& samples, double margin);

BasisSpec fit_basis(const Matrix& samples, int order, double margin);

/// phi(x) for one sample, laid out feature-major:
/// [phi_1(x_1) .. phi_p(x_1), phi_1(x_2) .. phi_p(x_n)].
Vector phi_point(const BasisSpec& spec, const Eigen::Ref<const Vector>& x,
                 BasisDiagnostics* diagnostics = nullptr);

/// Expanded feature matrix, (n*p) x m with column i = phi(row i of samples).
Matrix expand(const BasisSpec& spec, const Matrix& samples,
              BasisDiagnostics* diagnostics = nullptr);

}  // namespace hdmrge
