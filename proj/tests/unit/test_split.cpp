#include "hdmrge/error.hpp"
#include "hdmrge/split.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace {

using hdmrge::Labels;

Labels classes_of_sizes(const std::vector<int>& sizes) {
  Labels out;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    for (int i = 0; i < sizes[c]; ++i) out.push_back(static_cast<int>(c) + 1);
  }
  return out;
}

TEST(StratifiedCount, MinimumTwoRule) {
  EXPECT_EQ(hdmrge::stratified_train_count(10, 0.1), 2u);
  EXPECT_EQ(hdmrge::stratified_train_count(3, 0.1), 2u);
}

TEST(StratifiedCount, HalfOfFour) { EXPECT_EQ(hdmrge::stratified_train_count(4, 0.5), 2u); }

TEST(StratifiedCount, LeavesOneForTesting) {
  EXPECT_EQ(hdmrge::stratified_train_count(3, 0.9), 2u);
  EXPECT_EQ(hdmrge::stratified_train_count(10, 0.99), 9u);
}

TEST(StratifiedCount, Errors) {
  EXPECT_THROW(hdmrge::stratified_train_count(2, 0.5), hdmrge::DataError);
  EXPECT_THROW(hdmrge::stratified_train_count(10, 0.0), hdmrge::ParameterError);
  EXPECT_THROW(hdmrge::stratified_train_count(10, 1.0), hdmrge::ParameterError);
}

// Per-class training counts of two public benchmark scenes at 10%.
TEST(StratifiedCount, BotswanaClassSizesAtTenPercent) {
  const std::vector<std::size_t> sizes{270, 101, 251, 215, 269, 269, 259, 203, 314, 248, 305, 181, 268, 95};
  const std::vector<std::size_t> train{27, 11, 26, 22, 27, 27, 26, 21, 32, 25, 31, 19, 27, 10};
  std::size_t total = 0;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    EXPECT_EQ(hdmrge::stratified_train_count(sizes[c], 0.1), train[c]) << "class " << c + 1;
    total += train[c];
  }
  EXPECT_EQ(total, 331u);
}

TEST(StratifiedCount, IndianPinesClassSizesAtTenPercent) {
  const std::vector<std::size_t> sizes{46, 1428, 830, 237, 483, 730, 28, 478, 20, 972, 2455, 593, 205, 1265, 386, 93};
  const std::vector<std::size_t> train{5, 143, 83, 24, 49, 73, 3, 48, 2, 98, 246, 60, 21, 127, 39, 10};
  std::size_t total = 0;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    EXPECT_EQ(hdmrge::stratified_train_count(sizes[c], 0.1), train[c]) << "class " << c + 1;
    total += train[c];
  }
  EXPECT_EQ(total, 1031u);
}

TEST(StratifiedCount, LoukiaClassSizesAtTenPercent) {
  const std::vector<std::size_t> sizes{144, 34, 271, 40, 701, 112, 250, 536, 1897, 1402, 202, 244, 697, 226};
  const std::vector<std::size_t> train{15, 4, 28, 4, 71, 12, 25, 54, 190, 141, 21, 25, 70, 23};
  std::size_t total = 0;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    EXPECT_EQ(hdmrge::stratified_train_count(sizes[c], 0.1), train[c]) << "class " << c + 1;
    total += train[c];
  }
  EXPECT_EQ(total, 683u);
}

TEST(StratifiedSplit, DisjointCoveringSortedAndCounted) {
  const Labels labels = classes_of_sizes({10, 25, 7});
  const auto plan = hdmrge::stratified_split(labels, 0.3, 5);
  std::set<std::size_t> all(plan.train.begin(), plan.train.end());
  for (auto i : plan.test) EXPECT_TRUE(all.insert(i).second);
  EXPECT_EQ(all.size(), labels.size());
  EXPECT_TRUE(std::is_sorted(plan.train.begin(), plan.train.end()));
  EXPECT_TRUE(std::is_sorted(plan.test.begin(), plan.test.end()));
  EXPECT_EQ(plan.train_counts.at(1), 3u);
  EXPECT_EQ(plan.train_counts.at(2), 8u);
  EXPECT_EQ(plan.train_counts.at(3), 3u);
  EXPECT_EQ(plan.test_counts.at(2), 17u);
}

TEST(StratifiedSplit, DeterministicUnderSeed) {
  const Labels labels = classes_of_sizes({30, 30});
  const auto a = hdmrge::stratified_split(labels, 0.2, 9);
  const auto b = hdmrge::stratified_split(labels, 0.2, 9);
  const auto c = hdmrge::stratified_split(labels, 0.2, 10);
  EXPECT_EQ(a.train, b.train);
  EXPECT_NE(a.train, c.train);
}

TEST(StratifiedSplit, SmallClassNamed) {
  const Labels labels = classes_of_sizes({10, 2});
  try {
    hdmrge::stratified_split(labels, 0.1, 0);
    FAIL() << "expected DataError";
  } catch (const hdmrge::DataError& e) {
    EXPECT_NE(std::string(e.what()).find("class 2"), std::string::npos);
  }
}

// Property: each class's train share is within one sample of the target.
TEST(StratifiedSplitProperty, WithinOneSampleOfTarget) {
  for (double f : {0.05, 0.1, 0.25, 0.5}) {
    const Labels labels = classes_of_sizes({40, 77, 123, 301});
    const auto plan = hdmrge::stratified_split(labels, f, 3);
    for (const auto& [c, n] : plan.train_counts) {
      const double m = static_cast<double>(n + plan.test_counts.at(c));
      EXPECT_LT(std::abs(static_cast<double>(n) - f * m), 1.0) << c << " " << f;
    }
  }
}

TEST(StratifiedFolds, PartitionAndBalance) {
  const Labels labels = classes_of_sizes({10, 12, 3});
  const auto plans = hdmrge::stratified_folds(labels, 5, 1);
  ASSERT_EQ(plans.size(), 5u);
  std::multiset<std::size_t> tested;
  for (const auto& p : plans) {
    EXPECT_EQ(p.train.size() + p.test.size(), labels.size());
    tested.insert(p.test.begin(), p.test.end());
    EXPECT_EQ(p.test_counts.at(1), 2u);
    EXPECT_GE(p.test_counts.count(2) ? p.test_counts.at(2) : 0, 2u);
    EXPECT_GE(p.test.size(), 4u);
    EXPECT_LE(p.test.size(), 6u);
  }
  EXPECT_EQ(tested.size(), labels.size());
  EXPECT_EQ(std::set<std::size_t>(tested.begin(), tested.end()).size(), labels.size());
}

TEST(StratifiedFolds, Errors) {
  EXPECT_THROW(hdmrge::stratified_folds({1, 1, 2}, 1, 0), hdmrge::ParameterError);
  EXPECT_THROW(hdmrge::stratified_folds({1, 1, 2}, 4, 0), hdmrge::DataError);
}

}  // namespace
