#pragma once

#include "hdmrge/types.hpp"

#include <vector>

namespace hdmrge {

struct GepOptions {
  /// First jitter level, as a fraction of trace(B)/s.
  double initial_jitter = 1e-10;
  /// Last jitter level tried before giving up.
  double max_jitter = 1e-6;
  /// Relative symmetry tolerance on A and B (Frobenius norm).
  double symmetry_tolerance = 1e-10;
  /// A Cholesky pivot below pivot_floor * trace(B)/s is treated as a
  /// factorization failure; catches semi-definite B that factors by rounding.
  double pivot_floor = 1e-12;
};

struct EigenSolution {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // column k pairs with eigenvalues[k]
  /// False when at least one column lies (numerically) in the null space of
  /// B and was scaled to unit Euclidean norm instead.
  bool b_normalized = true;
  /// Absolute diagonal shift actually added to B (0 when none was needed).
  double jitter = 0.0;
  /// Per column: true when the vector was scaled to unit Euclidean norm
  /// because it lies in the null space of B (an "infinite" eigenvalue that
  /// only exists because of the jitter).
  std::vector<bool> null_direction;
};

/// The d smallest eigenpairs of (A + beta I) v = lambda B v, A and B symmetric
/// positive semi-definite. B is factorized by Cholesky with escalating
/// diagonal jitter, the pencil is reduced to a standard symmetric problem,
/// and eigenvectors are B-normalized with their largest-magnitude entry made
/// positive.
EigenSolution solve_gep(const Matrix& a, const Matrix& b, int d, double beta,
                        const GepOptions& options = {});

/// Drops leading eigenpairs with lambda < tol_zero * max(lambda_max, 1).
EigenSolution drop_trivial(const EigenSolution& solution, double tol_zero = 1e-9);

}  // namespace hdmrge
