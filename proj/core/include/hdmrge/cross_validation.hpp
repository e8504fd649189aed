#pragma once

#include "hdmrge/embedding.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hdmrge {

struct ParamGrid {
  std::vector<int> orders{4};
  std::vector<double> betas{100.0};
  std::vector<int> ks{5};

  std::size_t size() const noexcept { return orders.size() * betas.size() * ks.size(); }
};

struct GridScore {
  int order = 0;
  double beta = 0.0;
  int k = 0;
  double score = 0.0;  // mean fold 1-NN OA
  bool feasible = true;
  std::string note;    // first failure message when infeasible
};

struct CvResult {
  HdmrParams best;
  double best_score = 0.0;
  std::vector<GridScore> scores;  // grid order: p outer, beta, k inner
};

/// Stratified k-fold search. Each grid point is scored by the mean 1-NN OA of
/// the held-out fold embedded at d = number of classes. A grid point that
/// fails on any fold is scored 0 and flagged. Ties go to smaller p, then
/// smaller beta, then smaller k. For lpp the order axis collapses to the
/// first entry.
CvResult cross_validate(EmbeddingKind kind, const Matrix& samples, const Labels& labels,
                        const ParamGrid& grid, const HdmrParams& base, int folds,
                        std::uint64_t seed);

}  // namespace hdmrge
