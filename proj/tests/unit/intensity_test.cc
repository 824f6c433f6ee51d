#include "cmr/intensity.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "cmr/errors.hpp"

namespace cmr {
namespace {

TEST(GammaTest, Examples) {
  EXPECT_EQ(gamma(IntensityCurve::kRational, 1), 0.5);
  EXPECT_EQ(gamma(IntensityCurve::kRational, 3), 0.75);
  // 1 / (1 + e^-2) = 0.88079707797788244... (50-digit reference).
  EXPECT_NEAR(gamma(IntensityCurve::kSigmoid, 1), 0.88079707797788244406, 1e-15);
  EXPECT_EQ(gamma(IntensityCurve::kConstantOne, 17), 1.0);
  EXPECT_THROW(gamma(IntensityCurve::kRational, 0), ArgumentError);
}

TEST(GammaTest, RationalComplementWithinOneUlp) {
  // 1 - k/(1+k) = 1/(1+k) holds exactly in reals; in double the two
  // sides differ by at most one ulp of 1.
  for (std::int64_t k = 1; k <= 100000; ++k) {
    const double g = gamma(IntensityCurve::kRational, k);
    ASSERT_NEAR(1.0 - g, 1.0 / (1.0 + static_cast<double>(k)),
                std::numeric_limits<double>::epsilon());
  }
}

TEST(GammaTest, OrderingAndBounds) {
  for (std::int64_t k = 1; k < 1000; ++k) {
    const double s = gamma(IntensityCurve::kSigmoid, k);
    const double r = gamma(IntensityCurve::kRational, k);
    ASSERT_GT(s, r);
    ASSERT_LE(r, gamma(IntensityCurve::kRational, k + 1));
    ASSERT_LE(s, gamma(IntensityCurve::kSigmoid, k + 1));
    ASSERT_GT(r, 0.0);
    ASSERT_LT(r, 1.0);
  }
  EXPECT_NEAR(gamma(IntensityCurve::kRational, 1000000000), 1.0, 1e-8);
}

TEST(ScaleLossTest, Examples) {
  EXPECT_EQ(scale_loss(1.0, 2.5), 2.5);
  EXPECT_EQ(scale_loss(0.5, 2.0), 1.0);
  EXPECT_THROW(scale_loss(0.5, std::nan("")), NumericError);
  EXPECT_THROW(scale_loss(0.0, 1.0), ArgumentError);
  EXPECT_THROW(scale_loss(1.5, 1.0), ArgumentError);
}

TEST(ScaleLossTest, Linearity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const double g = 0.01 + 0.99 * u(rng);
    double sum = 0.0, scaled_sum = 0.0;
    for (int b = 0; b < 50; ++b) {
      const double loss = 3.0 * u(rng);
      sum += loss;
      scaled_sum += scale_loss(g, loss);
    }
    EXPECT_NEAR(scale_loss(g, sum), scaled_sum, 1e-12 * std::abs(scaled_sum));
  }
}

TEST(CurveNameTest, RoundTrip) {
  for (auto c : {IntensityCurve::kSigmoid, IntensityCurve::kRational,
                 IntensityCurve::kConstantOne}) {
    EXPECT_EQ(parse_curve(to_string(c)), c);
  }
  EXPECT_THROW(parse_curve("exp"), ArgumentError);
}

}  // namespace
}  // namespace cmr
