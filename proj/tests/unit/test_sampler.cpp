#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <algorithm>
#include <cmath>

#include "pcyl/errors.hpp"
#include "pcyl/measure.hpp"
#include "pcyl/sampler.hpp"
#include "pcyl/vacancy.hpp"
#include "support/oracles.hpp"

namespace pcyl {
namespace {

const WindowSpec kUnit3{Vec(3), 1.0};

// Count histogram against Poisson(mean), tail pooled; returns the p-value.
double poisson_gof_p(const std::vector<int>& counts, double mean) {
  const int n = static_cast<int>(counts.size());
  const int kmax = 8;
  std::vector<double> observed(kmax + 1, 0.0);
  for (int c : counts) observed[std::min(c, kmax)] += 1.0;
  boost::math::poisson_distribution<> pois(mean);
  double chi2 = 0.0;
  for (int k = 0; k <= kmax; ++k) {
    const double p = k < kmax ? boost::math::pdf(pois, k) : boost::math::cdf(boost::math::complement(pois, kmax - 1));
    const double e = n * p;
    chi2 += (observed[k] - e) * (observed[k] - e) / e;
  }
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<>(kmax), chi2));
}

TEST(Sampler, ZeroIntensityIsEmpty) {
  EXPECT_TRUE(sample_process(kUnit3, 0.0, 1, 0).lines.empty());
  EXPECT_THROW(sample_process(kUnit3, -1.0, 1, 0), Error);
}

TEST(Sampler, MeanCount) {
  const int n = 100000;
  double s = 0;
  for (int r = 0; r < n; ++r) s += static_cast<double>(sample_process(kUnit3, 0.1, 3, r).lines.size());
  const double mean = 0.1 * 4.0 * M_PI;
  EXPECT_NEAR(s / n, mean, 3.0 * std::sqrt(mean / n));
  EXPECT_NEAR(expected_line_count(kUnit3, 0.1), mean, 1e-12);
}

TEST(Sampler, OffsetDistributionKolmogorovSmirnov) {
  CounterRng rng(SeedDerivation{4, 0, 0, 0});
  const int n = 100000;
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = norm(draw_line(rng, Vec(3), 3.0).anchor);
  std::sort(t.begin(), t.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = (t[i] / 3.0) * (t[i] / 3.0);
    ks = std::max({ks, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(i + 1) / n)});
  }
  EXPECT_LT(ks, 1.63 / std::sqrt(n));
}

TEST(Sampler, DirectionIsotropy) {
  CounterRng rng(SeedDerivation{5, 0, 0, 0});
  CounterRng signs(SeedDerivation{5, 1, 0, 0});
  const int n = 100000, d = 3;
  double m[3][3] = {};
  for (int k = 0; k < n; ++k) {
    Vec v = draw_line(rng, Vec(d), 1.0).direction.vec();
    if (signs.uniform01() < 0.5) v = v * -1.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m[i][j] += v[i] * v[j];
  }
  // Var(v_i^2) = 2/(d(d+2)) - ... ; bound the per-entry sd by 1/sqrt(n).
  const double sigma = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) EXPECT_NEAR(m[i][j] / n, i == j ? 1.0 / d : 0.0, 5 * sigma);
}

TEST(Sampler, Reproducible) {
  const WindowSpec w{Point{1, 2, 3, 4}, 5.0};
  const auto a = sample_process(w, 0.7, 99, 3);
  const auto b = sample_process(w, 0.7, 99, 3);
  ASSERT_EQ(a.lines.size(), b.lines.size());
  for (std::size_t i = 0; i < a.lines.size(); ++i) {
    EXPECT_EQ(a.lines[i].anchor, b.lines[i].anchor);
    EXPECT_EQ(a.lines[i].direction.vec(), b.lines[i].direction.vec());
  }
  const auto c = sample_process(w, 0.7, 99, 4);
  EXPECT_FALSE(c.lines.size() == a.lines.size() && !a.lines.empty() && c.lines[0].anchor == a.lines[0].anchor);
}

TEST(Sampler, LinesMeetTheWindow) {
  const WindowSpec w{Point{1, -2, 3}, 4.0};
  const auto s = sample_process(w, 2.0, 6, 0);
  EXPECT_GT(s.lines.size(), 0u);
  for (const auto& l : s.lines) EXPECT_LE(dist_line_point(l, w.center), w.radius + 1 + 1e-9);
}

TEST(Thinning, Examples) {
  const WindowSpec w{Vec(3), 3.0};
  const auto s = sample_process(w, 1.0, 7, 0);
  const auto same = thin_process(s, 1.0, 1);
  ASSERT_EQ(same.lines.size(), s.lines.size());
  for (std::size_t i = 0; i < s.lines.size(); ++i) EXPECT_EQ(same.lines[i].anchor, s.lines[i].anchor);
  EXPECT_TRUE(thin_process(s, 0.0, 1).lines.empty());
  try {
    thin_process(s, 2.0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kIntensityOrder);
  }
}

TEST(Thinning, MeanRetainedCount) {
  const WindowSpec w{Vec(3), 2.0};
  const int n = 10000;
  double orig = 0, kept = 0;
  for (int r = 0; r < n; ++r) {
    const auto s = sample_process(w, 1.0, 8, r);
    orig += static_cast<double>(s.lines.size());
    kept += static_cast<double>(thin_process(s, 0.3, splitmix64(r)).lines.size());
  }
  const double mean = 0.3 * 9.0 * M_PI;
  EXPECT_NEAR(kept / n, mean, 3.0 * std::sqrt(mean / n));
  EXPECT_LT(kept, orig);
}

TEST(Thinning, TwoStepMatchesDirectLaw) {
  const WindowSpec w{Vec(3), 1.0};
  const int n = 50000;
  std::vector<int> two_step(n), direct(n);
  for (int r = 0; r < n; ++r) {
    const auto s = sample_process(w, 1.0, 9, r);
    two_step[r] = static_cast<int>(
        thin_process(thin_process(s, 0.5, splitmix64(2 * r)), 0.2, splitmix64(2 * r + 1)).lines.size());
    direct[r] = static_cast<int>(thin_process(s, 0.2, splitmix64(3 * r + 7)).lines.size());
  }
  const double mean = 0.2 * 4.0 * M_PI;
  EXPECT_GT(poisson_gof_p(two_step, mean), 0.001);
  EXPECT_GT(poisson_gof_p(direct, mean), 0.001);
}

TEST(Restriction, IdentityAndContainment) {
  const WindowSpec w{Vec(3), 3.0};
  const auto s = sample_process(w, 1.0, 10, 0);
  EXPECT_EQ(restrict_to_subwindow(s, w).lines.size(), s.lines.size());
  try {
    restrict_to_subwindow(s, WindowSpec{Point{2.5, 0, 0}, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kNotContained);
  }
}

TEST(Restriction, CountLaw) {
  const WindowSpec big{Vec(3), 3.0};
  const int n = 100000;
  std::vector<int> counts(n);
  double s = 0;
  for (int r = 0; r < n; ++r) {
    counts[r] = static_cast<int>(restrict_to_subwindow(sample_process(big, 0.1, 11, r), kUnit3).lines.size());
    s += counts[r];
  }
  const double mean = 0.4 * M_PI;
  EXPECT_NEAR(s / n, mean, 3.0 * std::sqrt(mean / n));
  EXPECT_GT(poisson_gof_p(counts, mean), 0.001);
}

TEST(Restriction, WindowExactness) {
  CounterRng rng(SeedDerivation{12, 0, 0, 0});
  const WindowSpec big{Vec(3), 6.0};
  const WindowSpec sub{Point{1, 1, 0}, 2.0};
  for (int r = 0; r < 20; ++r) {
    const auto s = sample_process(big, 0.5, 12, r);
    const auto t = restrict_to_subwindow(s, sub);
    for (int k = 0; k < 200; ++k) {
      Point p = sub.center + uniform_direction(rng, 3) * (2.0 * std::cbrt(rng.uniform01()));
      EXPECT_EQ(is_point_vacant(p, s), is_point_vacant(p, t));
    }
  }
}

}  // namespace
}  // namespace pcyl
