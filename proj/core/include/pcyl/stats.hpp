#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pcyl {

struct MeanError {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

/// Sample mean and standard error of the mean (n - 1 variance).
MeanError mean_error(std::span<const double> xs);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y = intercept + slope * x.
LineFit ols(std::span<const double> x, std::span<const double> y);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Fits log(mean_g values[g][k]) against log(scales[k]) and estimates the
/// slope error by the delete-one-group jackknife over the rows of `values`.
/// Scales whose pooled mean is not positive are skipped; fewer than two
/// usable scales yields NaN.
SlopeFit loglog_slope_jackknife(std::span<const double> scales,
                                const std::vector<std::vector<double>>& values);

}  // namespace pcyl
