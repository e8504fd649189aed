#include "hdmrge/split.hpp"

#include "hdmrge/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace hdmrge {

namespace {

std::map<int, std::vector<std::size_t>> members_by_class(const Labels& labels) {
  std::map<int, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < labels.size(); ++i) out[labels[i]].push_back(i);
  return out;
}

// Fisher-Yates with an explicit draw so the permutation does not depend on
// the standard library's shuffle implementation.
void permute(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

std::size_t stratified_train_count(std::size_t class_size, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ParameterError("train fraction must be in (0, 1)");
  }
  if (class_size < 3) throw DataError("class needs at least 3 samples for a split");
  const double raw = std::ceil(fraction * static_cast<double>(class_size) - 1e-9);
  const auto count = static_cast<std::size_t>(std::max(raw, 2.0));
  return std::min(count, class_size - 1);
}

SplitPlan stratified_split(const Labels& labels, double fraction, std::uint64_t seed) {
  auto members = members_by_class(labels);
  for (const auto& [label, idx] : members) {
    if (idx.size() < 3) {
      throw DataError("class " + std::to_string(label) + " has " + std::to_string(idx.size()) +
                      " samples; a split needs at least 3");
    }
  }
  std::mt19937_64 rng(seed);
  SplitPlan plan;
  for (auto& [label, idx] : members) {
    const std::size_t take = stratified_train_count(idx.size(), fraction);
    permute(idx, rng);
    plan.train.insert(plan.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take));
    plan.test.insert(plan.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(take), idx.end());
    plan.train_counts[label] = take;
    plan.test_counts[label] = idx.size() - take;
  }
  std::sort(plan.train.begin(), plan.train.end());
  std::sort(plan.test.begin(), plan.test.end());
  return plan;
}

std::vector<SplitPlan> stratified_folds(const Labels& labels, int folds, std::uint64_t seed) {
  if (folds < 2) throw ParameterError("need at least 2 folds");
  if (labels.size() < static_cast<std::size_t>(folds)) {
    throw DataError(std::to_string(labels.size()) + " samples cannot fill " + std::to_string(folds) +
                    " folds");
  }
  auto members = members_by_class(labels);
  std::mt19937_64 rng(seed);
  const auto nfolds = static_cast<std::size_t>(folds);
  std::vector<std::vector<std::size_t>> fold_of(nfolds);
  std::size_t offset = 0;
  for (auto& [label, idx] : members) {
    permute(idx, rng);
    for (std::size_t i = 0; i < idx.size(); ++i) fold_of[(offset + i) % nfolds].push_back(idx[i]);
    offset = (offset + idx.size()) % nfolds;
  }
  std::vector<SplitPlan> plans(static_cast<std::size_t>(folds));
  for (std::size_t f = 0; f < plans.size(); ++f) {
    for (std::size_t g = 0; g < fold_of.size(); ++g) {
      auto& dst = g == f ? plans[f].test : plans[f].train;
      dst.insert(dst.end(), fold_of[g].begin(), fold_of[g].end());
    }
    std::sort(plans[f].train.begin(), plans[f].train.end());
    std::sort(plans[f].test.begin(), plans[f].test.end());
    for (auto i : plans[f].train) ++plans[f].train_counts[labels[i]];
    for (auto i : plans[f].test) ++plans[f].test_counts[labels[i]];
  }
  return plans;
}

}  // namespace hdmrge
