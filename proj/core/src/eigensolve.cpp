#include "hdmrge/eigensolve.hpp"

#include "hdmrge/error.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>

namespace hdmrge {

namespace {

void check_symmetric(const Matrix& m, double tolerance, const char* name) {
  const double norm = m.norm();
  if ((m - m.transpose()).norm() > tolerance * norm) {
    throw ShapeError(std::string(name) + " is not symmetric");
  }
}

std::optional<Eigen::LLT<Matrix>> try_factor(const Matrix& b, double shift, double pivot_min) {
  Matrix shifted = b;
  shifted.diagonal().array() += shift;
  Eigen::LLT<Matrix> llt(shifted);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Vector pivots = llt.matrixLLT().diagonal();
  if (!pivots.allFinite() || pivots.minCoeff() <= 0.0) return std::nullopt;
  if (pivots.array().square().minCoeff() < pivot_min) return std::nullopt;
  return llt;
}

// Jitter perturbs the pencil; pull the finite-eigenvalue columns back onto
// the original (lhs, rhs) with two steps of subspace inverse iteration and a
// Rayleigh-Ritz projection. Components along B's near-null space carry huge
// eigenvalues and are damped at once.
void refine_against_pencil(const Matrix& lhs, const Matrix& rhs, EigenSolution& out) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index c = 0; c < out.eigenvalues.size(); ++c) {
    if (!out.null_direction[static_cast<std::size_t>(c)]) cols.push_back(c);
  }
  if (cols.empty()) return;
  const double rhs_norm = rhs.norm();
  if (!(rhs_norm > 0.0)) return;
  const double tau = 1e-8 * std::max(lhs.norm() / rhs_norm, 1e-300);
  const Eigen::LDLT<Matrix> shifted(lhs + tau * rhs);
  if (shifted.info() != Eigen::Success) return;

  const auto k = static_cast<Eigen::Index>(cols.size());
  Matrix block(lhs.rows(), k);
  for (Eigen::Index i = 0; i < k; ++i) block.col(i) = out.eigenvectors.col(cols[static_cast<std::size_t>(i)]);
  for (int step = 0; step < 2; ++step) {
    Matrix next = shifted.solve(rhs * block);
    if (!next.allFinite()) return;
    block = Eigen::HouseholderQR<Matrix>(next).householderQ() * Matrix::Identity(next.rows(), k);
  }
  Matrix h = block.transpose() * lhs * block;
  Matrix g = block.transpose() * rhs * block;
  h = 0.5 * (h + h.transpose());
  g = 0.5 * (g + g.transpose());
  const Eigen::LLT<Matrix> g_llt(g);
  if (g_llt.info() != Eigen::Success) return;
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ritz(h, g);
  if (ritz.info() != Eigen::Success) return;
  const Matrix vectors = block * ritz.eigenvectors();
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto c = cols[static_cast<std::size_t>(i)];
    out.eigenvalues(c) = ritz.eigenvalues()(i);
    out.eigenvectors.col(c) = vectors.col(i) / std::sqrt(vectors.col(i).dot(rhs * vectors.col(i)));
  }
}

void fix_sign(Eigen::Ref<Vector> v) {
  Eigen::Index at = 0;
  v.cwiseAbs().maxCoeff(&at);
  if (v(at) < 0.0) v = -v;
}

}  // namespace

EigenSolution solve_gep(const Matrix& a, const Matrix& b, int d, double beta,
                        const GepOptions& options) {
  const Eigen::Index s = a.rows();
  if (a.cols() != s || b.rows() != s || b.cols() != s || s == 0) {
    throw ShapeError("generalized eigenproblem needs two square matrices of equal size");
  }
  if (d < 1 || d > s) {
    throw ParameterError("requested " + std::to_string(d) + " eigenpairs of a " +
                         std::to_string(s) + "x" + std::to_string(s) + " pencil");
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be finite and >= 0");
  if (!a.allFinite() || !b.allFinite()) throw DataError("non-finite entry in eigenproblem input");
  check_symmetric(a, options.symmetry_tolerance, "A");
  check_symmetric(b, options.symmetry_tolerance, "B");

  Matrix lhs = 0.5 * (a + a.transpose());
  lhs.diagonal().array() += beta;
  const Matrix rhs = 0.5 * (b + b.transpose());

  const double scale = std::max(rhs.trace() / static_cast<double>(s), 0.0);
  const double pivot_min = options.pivot_floor * scale;

  std::vector<double> attempted;
  std::optional<Eigen::LLT<Matrix>> llt = try_factor(rhs, 0.0, pivot_min);
  attempted.push_back(0.0);
  double jitter = 0.0;
  for (double level = options.initial_jitter; !llt && level <= options.max_jitter * (1 + 1e-12);
       level *= 10.0) {
    jitter = level * scale;
    attempted.push_back(jitter);
    llt = try_factor(rhs, jitter, pivot_min);
  }
  if (!llt) {
    std::ostringstream msg;
    msg << "B could not be factorized; jitter tried:";
    for (double j : attempted) msg << ' ' << j;
    throw ConditioningError(msg.str(), attempted);
  }

  const auto lower = llt->matrixL();
  const Matrix half = lower.solve(lhs);  // L^-1 (A + beta I)
  Matrix reduced = lower.solve(half.transpose());
  reduced = 0.5 * (reduced + reduced.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> eig(reduced);
  if (eig.info() != Eigen::Success) {
    throw ConditioningError("symmetric eigensolver did not converge", attempted);
  }

  EigenSolution out;
  out.jitter = jitter;
  out.eigenvalues = eig.eigenvalues().head(d);
  out.eigenvectors = llt->matrixU().solve(eig.eigenvectors().leftCols(d));
  out.null_direction.assign(static_cast<std::size_t>(d), false);
  for (Eigen::Index c = 0; c < d; ++c) {
    auto v = out.eigenvectors.col(c);
    const double b_mass = v.dot(rhs * v);
    const double j_mass = b_mass + jitter * v.squaredNorm();
    if (b_mass > 0.5 * j_mass) {
      v /= std::sqrt(b_mass);
    } else {
      v.normalize();
      out.b_normalized = false;
      out.null_direction[static_cast<std::size_t>(c)] = true;
    }
  }
  if (jitter > 0.0) refine_against_pencil(lhs, rhs, out);
  for (Eigen::Index c = 0; c < d; ++c) fix_sign(out.eigenvectors.col(c));
  return out;
}

EigenSolution drop_trivial(const EigenSolution& solution, double tol_zero) {
  const Eigen::Index n = solution.eigenvalues.size();
  if (n == 0) return solution;
  // Null-direction eigenvalues are jitter artifacts and do not set the scale.
  double top = 0.0;
  bool any_finite = false;
  for (Eigen::Index c = 0; c < n; ++c) {
    const bool null_dir = static_cast<std::size_t>(c) < solution.null_direction.size() &&
                          solution.null_direction[static_cast<std::size_t>(c)];
    if (null_dir) continue;
    top = any_finite ? std::max(top, solution.eigenvalues(c)) : solution.eigenvalues(c);
    any_finite = true;
  }
  if (!any_finite) top = solution.eigenvalues.maxCoeff();
  const double threshold = tol_zero * std::max(top, 1.0);
  Eigen::Index first = 0;
  while (first < n && solution.eigenvalues(first) < threshold) ++first;

  EigenSolution out;
  out.b_normalized = solution.b_normalized;
  out.jitter = solution.jitter;
  out.eigenvalues = solution.eigenvalues.tail(n - first);
  out.eigenvectors = solution.eigenvectors.rightCols(n - first);
  if (solution.null_direction.size() == static_cast<std::size_t>(n)) {
    out.null_direction.assign(solution.null_direction.begin() + first,
                              solution.null_direction.end());
  }
  return out;
}

}  // namespace hdmrge
