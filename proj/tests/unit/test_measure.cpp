#include <gtest/gtest.h>

#include <cmath>

#include "pcyl/errors.hpp"
#include "pcyl/measure.hpp"
#include "pcyl/stats.hpp"

namespace pcyl {
namespace {

const Ball kB1{Vec(3), 1.0};
const Ball kB3{Vec(3), 3.0};

TEST(Measure, UnitBallVolume) {
  EXPECT_NEAR(unit_ball_volume(1), 2.0, 1e-15);
  EXPECT_NEAR(unit_ball_volume(2), M_PI, 1e-15);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 * M_PI / 3.0, 1e-14);
  EXPECT_NEAR(unit_ball_volume(4), M_PI * M_PI / 2.0, 1e-14);
  EXPECT_THROW(unit_ball_volume(0), Error);
}

TEST(Measure, ExactBall) {
  EXPECT_NEAR(mu_hit_ball_exact(3, 1.0).value, 4.0 * M_PI, 1e-12);
  EXPECT_NEAR(mu_hit_ball_exact(4, 0.0).value, 4.0 * M_PI / 3.0, 1e-12);
  EXPECT_NEAR(mu_hit_ball_exact(3, Point{100, -3, 7}, 1.0).value, 4.0 * M_PI, 1e-12);
  EXPECT_THROW(mu_hit_ball_exact(3, -0.5), Error);
}

TEST(Measure, MonteCarloBall) {
  const MeasureValue v = mu_hit_mc(3, kB1, kB3, 1000000, 1);
  EXPECT_NEAR(v.value, 4.0 * M_PI, 3.0 * v.std_error);
  EXPECT_LT(std::abs(v.value - 4.0 * M_PI) / (4.0 * M_PI), 0.01);
}

TEST(Measure, TargetEqualsEnvelope) {
  const MeasureValue v = mu_hit_mc(3, kB3, kB3, 10000, 2);
  EXPECT_DOUBLE_EQ(v.value, mu_hit_ball_exact(3, 3.0).value);
  EXPECT_EQ(v.hits, v.samples);
}

TEST(Measure, SegmentPairStableAcrossSeeds) {
  const HitRegion a = Segment{Point{-10, -5, 0}, Point{-10, -2.5, 0}};
  const HitRegion b = Segment{Point{10, -5, 0}, Point{10, -2.5, 0}};
  const Ball env{Point{-10, -3.75, 0}, 1.25};
  const MeasureValue s1 = mu_joint_hit_mc(3, a, b, env, 400000, 3);
  const MeasureValue s2 = mu_joint_hit_mc(3, a, b, env, 400000, 4);
  EXPECT_GT(s1.value, 0.0);
  EXPECT_LT(std::abs(s1.value - s2.value), 3.0 * std::hypot(s1.std_error, s2.std_error));
}

TEST(Measure, JointWithItselfIsSingle) {
  const MeasureValue single = mu_hit_mc(3, kB1, kB3, 100000, 5);
  const MeasureValue joint = mu_joint_hit_mc(3, kB1, kB1, kB3, 100000, 5);
  EXPECT_DOUBLE_EQ(single.value, joint.value);
}

TEST(Measure, Unbiased) {
  std::vector<double> means;
  for (int s = 0; s < 50; ++s) means.push_back(mu_hit_mc(3, kB1, kB3, 10000, 100 + s).value);
  const MeanError m = mean_error(means);
  EXPECT_LT(std::abs(m.mean - 4.0 * M_PI), 4.0 * m.std_error);
}

TEST(Measure, PathwiseMonotoneInTarget) {
  const HitRegion a = kB3;
  const std::vector<HitRegion> bs{Ball{Point{8, 0, 0}, 0.5}, Ball{Point{8, 0, 0}, 1.0},
                                  Ball{Point{8, 0, 0}, 2.0}};
  const auto v = mu_joint_hit_mc_multi(3, a, bs, kB3, 200000, 6);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_LE(v[0].hits, v[1].hits);
  EXPECT_LE(v[1].hits, v[2].hits);
}

TEST(Measure, RotationInvariance) {
  const HitRegion s1 = Segment{Point{0, 0, 0}, Point{2, 0, 0}};
  const double c = std::cos(0.7), sn = std::sin(0.7);
  const HitRegion s2 = Segment{Point{0, 0, 0}, Point{2 * c, 2 * sn, 0}};
  const MeasureValue a = mu_hit_mc(3, s1, kB3, 300000, 7);
  const MeasureValue b = mu_hit_mc(3, s2, kB3, 300000, 8);
  EXPECT_LT(std::abs(a.value - b.value), 3.0 * std::hypot(a.std_error, b.std_error));
}

TEST(Measure, ContainmentViolation) {
  try {
    mu_hit_mc(3, Ball{Point{2.5, 0, 0}, 1.0}, kB3, 1000, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kContainmentViolation);
  }
}

TEST(Measure, TwoPointMatchesEnvelope) {
  const HitRegion a = kB1;
  const HitRegion b = Ball{Point{16, 0, 0}, 1.0};
  const MeasureValue env = mu_joint_hit_mc(3, a, b, kB1, 2000000, 9);
  const MeasureValue tp = mu_joint_hit_crofton(3, a, b, 200000, 9);
  EXPECT_LT(std::abs(env.value - tp.value), 3.0 * std::hypot(env.std_error, tp.std_error));
  EXPECT_THROW(mu_joint_hit_crofton(3, a, Ball{Point{3, 0, 0}, 1.0}, 1000, 1), Error);
}

TEST(Measure, VoidProbability) {
  EXPECT_NEAR(void_probability_exact(3, 0.1, 1.0), std::exp(-0.4 * M_PI), 1e-15);
  EXPECT_NEAR(void_probability_exact(3, 0.1, 1.0), 0.2846, 1e-4);
  EXPECT_DOUBLE_EQ(void_probability_exact(3, 0.0, 5.0), 1.0);
}

TEST(Measure, CovarianceNonNegativeAndDecays) {
  double prev = INFINITY;
  for (double sep : {4.0, 16.0, 64.0}) {
    const auto c = point_pair_covariance(3, 1.0, sep, 100000, 10, JointEstimator::kCrofton);
    EXPECT_GE(c.covariance, 0.0);
    EXPECT_LT(c.covariance, prev);
    prev = c.covariance;
  }
  const auto env = point_pair_covariance(3, 1.0, 4.0, 100000, 10, JointEstimator::kEnvelope);
  EXPECT_GE(env.covariance, 0.0);
  try {
    point_pair_covariance(3, 1.0, 2.0, 100, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kSeparationTooSmall);
  }
}

TEST(Measure, ThreadCountDoesNotChangeResult) {
  const HitRegion s = Segment{Point{0, 0, 0}, Point{2, 0, 0}};
  const MeasureValue a = mu_hit_mc(3, s, kB3, 300000, 11, McOptions{1, 0});
  const MeasureValue b = mu_hit_mc(3, s, kB3, 300000, 11, McOptions{4, 0});
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
  const MeasureValue c = mu_joint_hit_crofton(3, kB1, Ball{Point{10, 0, 0}, 1}, 300000, 11, McOptions{1, 0});
  const MeasureValue d = mu_joint_hit_crofton(3, kB1, Ball{Point{10, 0, 0}, 1}, 300000, 11, McOptions{3, 0});
  EXPECT_EQ(c.value, d.value);
}

}  // namespace
}  // namespace pcyl
