#include "pcyl/stats.hpp"

#include <cmath>
#include <limits>

#include "pcyl/errors.hpp"

namespace pcyl {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

LineFit fit_means(std::span<const double> scales, const std::vector<std::vector<double>>& values,
                  std::size_t skip) {
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < scales.size(); ++k) {
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t g = 0; g < values.size(); ++g) {
      if (g == skip) continue;
      s += values[g][k];
      ++n;
    }
    const double m = s / static_cast<double>(n);
    if (m > 0.0) {
      lx.push_back(std::log(scales[k]));
      ly.push_back(std::log(m));
    }
  }
  if (lx.size() < 2) return {kNaN, kNaN};
  return ols(lx, ly);
}

}  // namespace

MeanError mean_error(std::span<const double> xs) {
  MeanError out;
  out.n = xs.size();
  if (xs.empty()) return out;
  double s = 0.0;
  for (double x : xs) s += x;
  out.mean = s / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.std_error = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  return out;
}

LineFit ols(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) fail(Errc::kOutOfRange, "ols needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

SlopeFit loglog_slope_jackknife(std::span<const double> scales,
                                const std::vector<std::vector<double>>& values) {
  for (const auto& row : values)
    if (row.size() != scales.size()) fail(Errc::kDimensionMismatch, "jackknife row length");
  const std::size_t none = values.size();
  const LineFit full = fit_means(scales, values, none);
  SlopeFit out{full.slope, full.intercept, kNaN};
  const std::size_t g = values.size();
  if (g < 2 || std::isnan(full.slope)) return out;
  std::vector<double> loo(g);
  double mean = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    loo[i] = fit_means(scales, values, i).slope;
    mean += loo[i];
  }
  mean /= static_cast<double>(g);
  double ss = 0.0;
  for (double s : loo) ss += (s - mean) * (s - mean);
  out.slope_stderr = std::sqrt(ss * static_cast<double>(g - 1) / static_cast<double>(g));
  return out;
}

}  // namespace pcyl
