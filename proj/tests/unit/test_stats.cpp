#include <gtest/gtest.h>

#include <vector>

#include "recaudit/stats.hpp"

namespace recaudit {
namespace {

// Reference values from scipy.stats.ttest_ind (scipy 1.x), computed once and
// frozen here.
constexpr double kPooledT = -1.224744871391589;
constexpr double kPooledP = 0.2878641347266908;

TEST(TTest, PooledReference) {
  const std::vector<double> a{1, 2, 3}, b{2, 3, 4};
  const auto r = t_test_two_sample(a, b, TTestVariant::pooled);
  EXPECT_NEAR(r.t, -1.224745, 1e-6);
  EXPECT_NEAR(r.t, kPooledT, 1e-12);
  EXPECT_EQ(r.df, 4.0);
  EXPECT_NEAR(r.p_two_tailed, 0.2879, 5e-4);
  EXPECT_NEAR(r.p_two_tailed, kPooledP, 1e-9);
}

TEST(TTest, IdenticalSamples) {
  const std::vector<double> a{63.5, 10.0, 71.25, 40.0};
  for (auto v : {TTestVariant::pooled, TTestVariant::welch}) {
    const auto r = t_test_two_sample(a, a, v);
    EXPECT_EQ(r.t, 0.0);
    EXPECT_EQ(r.p_two_tailed, 1.0);
  }
}

TEST(TTest, ZeroVariance) {
  const std::vector<double> a{0, 0, 0, 0}, b{1, 1, 1, 1};
  EXPECT_THROW(t_test_two_sample(a, b, TTestVariant::pooled), DomainError);
  try {
    t_test_two_sample(a, b, TTestVariant::pooled);
  } catch (const DomainError& e) {
    EXPECT_STREQ(e.what(), "zero variance");
  }
  const auto same = t_test_two_sample(a, a, TTestVariant::pooled);
  EXPECT_EQ(same.t, 0.0);
  EXPECT_EQ(same.p_two_tailed, 1.0);
}

TEST(TTest, TooFewObservations) {
  const std::vector<double> a{1}, b{1, 2};
  EXPECT_THROW(t_test_two_sample(a, b, TTestVariant::pooled), DomainError);
}

TEST(TTest, UnequalSizesAgainstReference) {
  // scipy.stats.ttest_ind(a, b) and ttest_ind(a, b, equal_var=False).
  const std::vector<double> a{1.5, 2.5, 9, 4}, b{3, 1, 0.5, 2, 7, 2};
  const auto pooled = t_test_two_sample(a, b, TTestVariant::pooled);
  EXPECT_NEAR(pooled.t, 0.9392285351355956, 1e-12);
  EXPECT_NEAR(pooled.p_two_tailed, 0.3751014726248566, 1e-9);
  const auto welch = t_test_two_sample(a, b, TTestVariant::welch);
  EXPECT_NEAR(welch.t, 0.8690724993137477, 1e-12);
  EXPECT_NEAR(welch.p_two_tailed, 0.42480933415728644, 1e-9);
}

TEST(TTest, CohortExample) {
  // scipy.stats.ttest_ind([80, 90, 70], [40, 50, 60])
  const std::vector<double> w{80, 90, 70}, i{40, 50, 60};
  const auto r = t_test_two_sample(w, i, TTestVariant::pooled);
  EXPECT_NEAR(r.t, 3.6742346141747677, 1e-12);
  EXPECT_NEAR(r.p_two_tailed, 0.021311641128756713, 1e-9);
}

TEST(TTest, SymmetricInSampleOrder) {
  const std::vector<double> a{1.5, 2.5, 9, 4}, b{3, 1, 0.5, 2, 7, 2};
  const auto ab = t_test_two_sample(a, b, TTestVariant::welch);
  const auto ba = t_test_two_sample(b, a, TTestVariant::welch);
  EXPECT_DOUBLE_EQ(ab.t, -ba.t);
  EXPECT_DOUBLE_EQ(ab.p_two_tailed, ba.p_two_tailed);
}

}  // namespace
}  // namespace recaudit
