#include <gtest/gtest.h>

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <vector>

#include "ara/error.hpp"
#include "ara/rng.hpp"
#include "ara/stats.hpp"

using namespace ara;

namespace {

// Closed-form paired t statistic written out term by term.
double t_oracle(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = b[i] - a[i];
    sum += d;
    sum_sq += d * d;
  }
  const double var = (sum_sq - sum * sum / n) / (n - 1.0);
  return (sum / n) / std::sqrt(var / n);
}

const std::vector<double> kL{0.697, 0.641, 0.618, 0.682};
const std::vector<double> kAllL{0.814, 0.648, 0.685, 0.717};

}  // namespace

TEST(IncompleteBeta, KnownValues) {
  EXPECT_NEAR(incomplete_beta(1.0, 1.0, 0.3), 0.3, 1e-15);
  EXPECT_NEAR(incomplete_beta(2.0, 3.0, 0.4), 0.5248, 1e-14);  // 1 - (1-x)^3 (1+3x)
  EXPECT_EQ(incomplete_beta(2.0, 3.0, 0.0), 0.0);
  EXPECT_EQ(incomplete_beta(2.0, 3.0, 1.0), 1.0);
  EXPECT_THROW(incomplete_beta(0.0, 1.0, 0.5), Error);
  EXPECT_THROW(incomplete_beta(1.0, 1.0, 1.5), Error);
}

TEST(StudentT, MatchesBoost) {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const double df = 1.0 + static_cast<double>(rng.below(40));
    const double t = (rng.uniform() - 0.5) * 16.0;
    const boost::math::students_t dist(df);
    const double expected = boost::math::cdf(boost::math::complement(dist, t));
    EXPECT_NEAR(student_t_sf(t, df), expected, 1e-8 * std::max(expected, 1e-300) + 1e-300) << t << " " << df;
  }
}

TEST(StudentT, ReferenceValues) {
  EXPECT_NEAR(student_t_sf(2.0, 5), 0.05096973941492914, 1e-12);
  EXPECT_NEAR(student_t_sf(0.5, 1), 0.3524163823495668, 1e-12);
  EXPECT_NEAR(student_t_sf(3.5, 10), 0.0028632527149426053, 1e-14);
  EXPECT_NEAR(1.0 - student_t_sf(-1.2, 7), 0.1345859684136032, 1e-12);
  EXPECT_EQ(student_t_sf(0.0, 3), 0.5);
}

TEST(PairedTTest, PublishedColumns) {
  const auto r = paired_ttest(kL, kAllL);
  EXPECT_NEAR(r.t, t_oracle(kL, kAllL), 1e-12);
  EXPECT_NEAR(r.t, 2.394, 0.0005);
  EXPECT_EQ(r.df, 3);
  EXPECT_NEAR(r.p, 0.048, 0.0005);
  EXPECT_NEAR(r.p, 0.0481897564375082, 1e-10);
  const auto two = paired_ttest(kL, kAllL, Tail::Two);
  EXPECT_NEAR(two.p, 0.0963795128750164, 1e-10);
  const auto j = r.to_json();
  EXPECT_EQ(j["tail"], "one");
  EXPECT_EQ(j["df"], 3);
}

TEST(PairedTTest, AntisymmetricUnderSwap) {
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + rng.below(10);
    std::vector<double> a(n), b(n);
    for (std::size_t k = 0; k < n; ++k) {
      a[k] = rng.uniform();
      b[k] = rng.uniform();
    }
    const auto ab = paired_ttest(a, b);
    const auto ba = paired_ttest(b, a);
    EXPECT_NEAR(ab.t, -ba.t, 1e-12 * std::fabs(ab.t) + 1e-12);
    EXPECT_NEAR(ab.p + ba.p, 1.0, 1e-10);
    EXPECT_NEAR(paired_ttest(a, b, Tail::Two).p, paired_ttest(b, a, Tail::Two).p, 1e-12);
    EXPECT_NEAR(ab.t, t_oracle(a, b), 1e-9 * std::fabs(ab.t) + 1e-9);
  }
}

TEST(PairedTTest, ZeroVarianceRejected) {
  std::vector<double> shifted = kL;
  for (auto& v : shifted) v += 0.05;
  EXPECT_THROW(paired_ttest(kL, shifted), Error);
  EXPECT_THROW(paired_ttest(kL, kL), Error);
}

TEST(PairedTTest, InputErrors) {
  EXPECT_THROW(paired_ttest(std::vector<double>{1.0}, std::vector<double>{2.0}), Error);
  EXPECT_THROW(paired_ttest(std::vector<double>{1.0, 2.0}, std::vector<double>{2.0}), Error);
  EXPECT_THROW(parse_tail("three"), Error);
  EXPECT_EQ(parse_tail("two"), Tail::Two);
}
