#pragma once

#include "hdmrge/types.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace hdmrge {

struct SplitPlan {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
  std::map<int, std::size_t> train_counts;
  std::map<int, std::size_t> test_counts;
};

/// Size of the per-class training draw: ceil(fraction * m_c), at least 2 and
/// at most m_c - 1.
std::size_t stratified_train_count(std::size_t class_size, double fraction);

/// Per-class sampling without replacement; every class needs >= 3 samples.
SplitPlan stratified_split(const Labels& labels, double fraction, std::uint64_t seed);

/// Stratified k-fold partition: plan f holds fold f as test and the rest as
/// train. Classes smaller than the fold count are dealt round-robin from a
/// running offset, so they are missing from some folds' test sides.
std::vector<SplitPlan> stratified_folds(const Labels& labels, int folds, std::uint64_t seed);

}  // namespace hdmrge
