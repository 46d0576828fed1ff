#include <gtest/gtest.h>

#include <cmath>

#include "pcyl/errors.hpp"
#include "pcyl/stats.hpp"

namespace pcyl {
namespace {

TEST(Stats, MeanError) {
  const std::vector<double> xs{1, 2, 3, 4};
  const MeanError m = mean_error(xs);
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_NEAR(m.std_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
  EXPECT_EQ(m.n, 4u);
}

TEST(Stats, OlsExactLine) {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const LineFit f = ols(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_THROW(ols(std::vector<double>{1}, std::vector<double>{1}), Error);
}

TEST(Stats, JackknifeOnExactPowerLaw) {
  const std::vector<double> scales{16, 32, 64, 128};
  std::vector<std::vector<double>> values(10);
  for (auto& row : values)
    for (double s : scales) row.push_back(5.0 * std::pow(s, -2.0));
  const SlopeFit f = loglog_slope_jackknife(scales, values);
  EXPECT_NEAR(f.slope, -2.0, 1e-12);
  EXPECT_NEAR(f.slope_stderr, 0.0, 1e-12);
}

TEST(Stats, JackknifeSpreadIsPositive) {
  const std::vector<double> scales{1, 2, 4};
  const std::vector<std::vector<double>> values{{1.0, 0.5, 0.3}, {1.2, 0.4, 0.2}, {0.9, 0.6, 0.25}};
  const SlopeFit f = loglog_slope_jackknife(scales, values);
  EXPECT_LT(f.slope, 0.0);
  EXPECT_GT(f.slope_stderr, 0.0);
}

TEST(Stats, JackknifeSkipsZeroMeans) {
  const std::vector<double> scales{1, 2, 4};
  const std::vector<std::vector<double>> two{{1.0, 0.5, 0.0}, {1.0, 0.5, 0.0}};
  EXPECT_NEAR(loglog_slope_jackknife(scales, two).slope, -1.0, 1e-12);
  const std::vector<std::vector<double>> one{{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
  EXPECT_TRUE(std::isnan(loglog_slope_jackknife(scales, one).slope));
}

}  // namespace
}  // namespace pcyl
