#include "pcyl/experiments.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "pcyl/errors.hpp"
#include "pcyl/parallel.hpp"
#include "pcyl/sampler.hpp"
#include "pcyl/stats.hpp"

namespace pcyl {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += fmt::format("{}{:g}", i ? "," : "", xs[i]);
  return s;
}

void check_dim(int d) {
  if (d < 2 || d > kMaxDim) fail(Errc::kOutOfRange, "dimension must be in [2, 8]");
}

void check_replicates(int reps) {
  if (reps < 1) fail(Errc::kOutOfRange, "replicates must be positive");
}

void check_nonempty(const std::vector<double>& xs, const char* what) {
  if (xs.empty()) fail(Errc::kOutOfRange, std::string(what) + " must not be empty");
}

Point axis_point(int d, double x) {
  Point p(d);
  p[0] = x;
  return p;
}

// values[g][k]: group g's two-point estimate for pair k. Every pair in one
// group uses the same substream, so errors are positively correlated across
// k and slopes are estimated with less noise.
std::vector<std::vector<double>> crofton_groups(
    int d, const std::vector<std::pair<HitRegion, HitRegion>>& pairs, std::uint64_t n_total,
    std::uint64_t seed, std::uint64_t stream, const ExpOptions& opt) {
  const int groups = std::max(2, opt.groups);
  const std::uint64_t per = std::max<std::uint64_t>(2, n_total / static_cast<std::uint64_t>(groups));
  const std::size_t k_count = pairs.size();
  std::vector<std::vector<double>> values(static_cast<std::size_t>(groups),
                                          std::vector<double>(k_count));
  parallel_for(static_cast<std::size_t>(groups) * k_count, opt.threads, [&](std::size_t t) {
    const std::size_t g = t / k_count, k = t % k_count;
    values[g][k] = mu_joint_hit_crofton(d, pairs[k].first, pairs[k].second, per, seed,
                                        McOptions{1, splitmix64(stream + g)})
                       .value;
  });
  return values;
}

MeanError column(const std::vector<std::vector<double>>& values, std::size_t k) {
  std::vector<double> col;
  col.reserve(values.size());
  for (const auto& row : values) col.push_back(row[k]);
  return mean_error(col);
}

ReportRow row(const std::string& kind, const std::string& id, int d, double u, double scale,
              double eps, std::uint64_t reps, double est, double se, std::uint64_t seed) {
  return ReportRow{kind, id, d, u, scale, eps, reps, est, se, seed};
}

void add_fit(EstimateReport& rep, const std::string& id, int d, double u, double eps,
             std::uint64_t reps, const SlopeFit& fit, std::uint64_t seed) {
  rep.rows.push_back(row("fit", id, d, u, 0.0, eps, reps, fit.slope, fit.slope_stderr, seed));
}

// Shared driver for the planar crossing experiments. ind[rep][ui][si][ei].
struct CrossingGrid {
  std::vector<std::vector<std::vector<std::vector<std::uint8_t>>>> ind;
};

CrossingGrid run_crossings(int d, CrossingKind kind, const std::vector<double>& us,
                           const std::vector<double>& scales, const std::vector<double>& epsilons,
                           int replicates, std::uint64_t seed, std::uint64_t stream,
                           const ExpOptions& opt) {
  std::vector<std::size_t> order(us.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return us[a] > us[b]; });
  const double amax = *std::max_element(scales.begin(), scales.end());
  const Point origin(d);
  const PlaneSpec plane = PlaneSpec::through_origin(d);

  CrossingGrid out;
  out.ind.assign(static_cast<std::size_t>(replicates),
                 std::vector<std::vector<std::vector<std::uint8_t>>>(
                     us.size(), std::vector<std::vector<std::uint8_t>>(
                                    scales.size(), std::vector<std::uint8_t>(epsilons.size()))));

  parallel_for(static_cast<std::size_t>(replicates), opt.threads, [&](std::size_t r) {
    const WindowSpec window{origin, amax * std::sqrt(2.0)};
    LineProcessSample cur = sample_process(window, us[order.front()], seed, r, stream);
    for (std::size_t step = 0; step < order.size(); ++step) {
      const std::size_t ui = order[step];
      if (step > 0) cur = thin_process(cur, us[ui], splitmix64(seed ^ splitmix64(stream + step)));
      for (std::size_t si = 0; si < scales.size(); ++si) {
        const double a = scales[si];
        const LineProcessSample sub =
            restrict_to_subwindow(cur, WindowSpec{origin, a * std::sqrt(2.0)});
        for (std::size_t ei = 0; ei < epsilons.size(); ++ei) {
          const auto slice = build_slice(sub, plane, PlanarSquare{plane, 0.0, 0.0, a}, epsilons[ei]);
          out.ind[r][ui][si][ei] = has_crossing(slice, annulus_crossing(kind, 0.0, 0.0, a)) ? 1 : 0;
        }
      }
    }
    // Coupled monotonicity along the thinning chain (decreasing u).
    for (std::size_t si = 0; si < scales.size(); ++si)
      for (std::size_t ei = 0; ei < epsilons.size(); ++ei)
        for (std::size_t step = 1; step < order.size(); ++step) {
          const int hi = out.ind[r][order[step - 1]][si][ei];
          const int lo = out.ind[r][order[step]][si][ei];
          const bool broken = kind == CrossingKind::kOccupied ? lo > hi : lo < hi;
          if (broken)
            fail(Errc::kInvariantViolated,
                 fmt::format("coupled crossing not monotone (replicate {}, scale {})", r,
                             scales[si]));
        }
  });
  return out;
}

void crossing_rows(EstimateReport& rep, const std::string& id, int d,
                   const std::vector<double>& us, const std::vector<double>& scales,
                   const std::vector<double>& epsilons, int replicates, std::uint64_t seed,
                   const CrossingGrid& grid, bool recursion) {
  for (std::size_t ei = 0; ei < epsilons.size(); ++ei) {
    for (std::size_t ui = 0; ui < us.size(); ++ui) {
      std::vector<std::vector<double>> values(static_cast<std::size_t>(replicates),
                                              std::vector<double>(scales.size()));
      for (int r = 0; r < replicates; ++r)
        for (std::size_t si = 0; si < scales.size(); ++si)
          values[r][si] = grid.ind[r][ui][si][ei];
      std::vector<double> p(scales.size()), se(scales.size());
      for (std::size_t si = 0; si < scales.size(); ++si) {
        const MeanError m = column(values, si);
        p[si] = m.mean;
        se[si] = m.std_error;
        rep.rows.push_back(row("estimate", id, d, us[ui], scales[si], epsilons[ei],
                               static_cast<std::uint64_t>(replicates), m.mean, m.std_error, seed));
      }
      add_fit(rep, "slope", d, us[ui], epsilons[ei], static_cast<std::uint64_t>(replicates),
              loglog_slope_jackknife(scales, values), seed);
      if (!recursion || scales.size() < 2) continue;
      // p_n against C (a_n / a_{n-1})^2 (p_{n-1}^2 + u a_{n-1}^{2 - c(d-1)}), C by least squares
      std::vector<double> x(scales.size(), 0.0);
      double sxy = 0.0, sxx = 0.0;
      for (std::size_t n = 1; n < scales.size(); ++n) {
        const double ratio = scales[n] / scales[n - 1];
        x[n] = ratio * ratio *
               (p[n - 1] * p[n - 1] + us[ui] * std::pow(scales[n - 1], 2.0 - kSlowGrowth * (d - 1)));
        sxy += p[n] * x[n];
        sxx += x[n] * x[n];
      }
      const double c = sxx > 0.0 ? sxy / sxx : 0.0;
      for (std::size_t n = 1; n < scales.size(); ++n)
        rep.rows.push_back(row("residual", "recursion", d, us[ui], scales[n], epsilons[ei],
                               static_cast<std::uint64_t>(replicates), p[n] - c * x[n], se[n],
                               seed));
      rep.rows.push_back(row("fit", "recursion_C", d, us[ui], 0.0, epsilons[ei],
                             static_cast<std::uint64_t>(replicates), c, 0.0, seed));
    }
  }
}

}  // namespace

std::vector<double> ScaleSchedule::scales() const {
  if (!(a0 > 1.0)) fail(Errc::kOutOfRange, "schedule base scale must exceed 1");
  if (n_max < 0) fail(Errc::kOutOfRange, "schedule length must be >= 0");
  std::vector<double> out;
  for (int n = 0; n <= n_max; ++n) {
    switch (rule) {
      case Rule::kPowerThreeHalves:
        out.push_back(std::pow(a0, std::pow(1.5, n)));
        break;
      case Rule::kPowerSlow:
        out.push_back(std::pow(a0, std::pow(kSlowGrowth, n)));
        break;
      case Rule::kGeometric:
        if (!(growth > 1.0)) fail(Errc::kOutOfRange, "geometric growth must exceed 1");
        out.push_back(a0 * std::pow(growth, n));
        break;
    }
  }
  return out;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "mu-scaling",   "square-scaling",    "covariance-decay", "occupied-crossing",
      "vacant-reach", "triangle-contrast", "d2-sanity"};
  return names;
}

EstimateReport exp_mu_scaling(int d, double r, const std::vector<double>& alphas,
                              std::uint64_t n_lines, std::uint64_t seed, JointEstimator estimator,
                              const ExpOptions& opt) {
  const auto t0 = Clock::now();
  check_dim(d);
  check_nonempty(alphas, "alphas");
  if (!(r >= 0.0)) fail(Errc::kOutOfRange, "ball radius must be >= 0");
  for (double a : alphas)
    if (!(a >= 2.0 * (r + 1.0)))
      fail(Errc::kHypothesisViolated, fmt::format("alpha {} < 2(r + 1)", a));

  EstimateReport rep;
  rep.experiment = "mu-scaling";
  rep.master_seed = seed;
  rep.parameters = {{"d", std::to_string(d)},
                    {"r", fmt::format("{:g}", r)},
                    {"alphas", join(alphas)},
                    {"n", std::to_string(n_lines)},
                    {"groups", std::to_string(opt.groups)},
                    {"estimator", estimator == JointEstimator::kCrofton ? "two-point" : "envelope"}};

  const HitRegion a = Ball{Point(d), r};
  std::vector<std::vector<double>> values;
  const std::uint64_t stream = hash_label("mu-scaling");
  if (estimator == JointEstimator::kCrofton) {
    std::vector<std::pair<HitRegion, HitRegion>> pairs;
    for (double al : alphas) pairs.emplace_back(a, Ball{axis_point(d, al), r});
    values = crofton_groups(d, pairs, n_lines, seed, stream, opt);
  } else {
    const int groups = std::max(2, opt.groups);
    std::vector<HitRegion> bs;
    for (double al : alphas) bs.push_back(Ball{axis_point(d, al), r});
    values.assign(static_cast<std::size_t>(groups), {});
    const std::uint64_t per = std::max<std::uint64_t>(1, n_lines / static_cast<std::uint64_t>(groups));
    parallel_for(static_cast<std::size_t>(groups), opt.threads, [&](std::size_t g) {
      const auto est = mu_joint_hit_mc_multi(d, a, bs, std::get<Ball>(a), per, seed,
                                             McOptions{1, splitmix64(stream + g)});
      for (const auto& e : est) values[g].push_back(e.value);
    });
  }
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const MeanError m = column(values, k);
    rep.rows.push_back(row("estimate", "mu_joint", d, 0.0, alphas[k], 0.0, values.size(), m.mean,
                           m.std_error, seed));
  }
  add_fit(rep, "slope", d, 0.0, 0.0, values.size(), loglog_slope_jackknife(alphas, values), seed);
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

EstimateReport exp_square_scaling(int d, double s, const std::vector<double>& rs,
                                  std::uint64_t n_lines, std::uint64_t seed, double ratio_r,
                                  const ExpOptions& opt) {
  const auto t0 = Clock::now();
  check_dim(d);
  check_nonempty(rs, "rs");
  if (!(s >= 1.0)) fail(Errc::kHypothesisViolated, "square side must be >= 1");
  for (double r : rs)
    if (!(r >= 4.0)) fail(Errc::kHypothesisViolated, fmt::format("square gap {} < 4", r));
  if (ratio_r <= 0.0) ratio_r = *std::max_element(rs.begin(), rs.end());
  if (!(ratio_r >= 4.0)) fail(Errc::kHypothesisViolated, "ratio gap must be >= 4");

  const PlaneSpec plane = PlaneSpec::through_origin(d);
  auto square_pair = [&](double side, double gap) {
    const double h = 0.5 * side;
    return std::make_pair(HitRegion{PlanarSquare{plane, 0.0, 0.0, h}},
                          HitRegion{PlanarSquare{plane, side + gap, 0.0, h}});
  };
  std::vector<std::pair<HitRegion, HitRegion>> pairs;
  for (double r : rs) pairs.push_back(square_pair(s, r));
  pairs.push_back(square_pair(s, ratio_r));
  pairs.push_back(square_pair(2.0 * s, ratio_r));
  const auto values = crofton_groups(d, pairs, n_lines, seed, hash_label("square-scaling"), opt);

  EstimateReport rep;
  rep.experiment = "square-scaling";
  rep.master_seed = seed;
  rep.parameters = {{"d", std::to_string(d)},          {"s", fmt::format("{:g}", s)},
                    {"rs", join(rs)},                   {"n", std::to_string(n_lines)},
                    {"ratio_r", fmt::format("{:g}", ratio_r)}, {"groups", std::to_string(opt.groups)}};
  std::vector<std::vector<double>> main(values.size());
  for (std::size_t g = 0; g < values.size(); ++g)
    main[g].assign(values[g].begin(), values[g].begin() + static_cast<long>(rs.size()));
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const MeanError m = column(values, k);
    rep.rows.push_back(
        row("estimate", "mu_squares", d, 0.0, rs[k], 0.0, values.size(), m.mean, m.std_error, seed));
  }
  add_fit(rep, "slope", d, 0.0, 0.0, values.size(), loglog_slope_jackknife(rs, main), seed);

  // ratio of pooled means, stderr by the delete-one-group jackknife
  const std::size_t k1 = rs.size(), k2 = rs.size() + 1;
  const std::size_t g_count = values.size();
  double s1 = 0.0, s2 = 0.0;
  for (const auto& v : values) {
    s1 += v[k1];
    s2 += v[k2];
  }
  const double ratio = s2 / s1;
  std::vector<double> loo(g_count);
  double mean_loo = 0.0;
  for (std::size_t g = 0; g < g_count; ++g) {
    loo[g] = (s2 - values[g][k2]) / (s1 - values[g][k1]);
    mean_loo += loo[g];
  }
  mean_loo /= static_cast<double>(g_count);
  double ss = 0.0;
  for (double x : loo) ss += (x - mean_loo) * (x - mean_loo);
  const double ratio_se = std::sqrt(ss * static_cast<double>(g_count - 1) / static_cast<double>(g_count));
  rep.rows.push_back(row("ratio", "side_doubling", d, 0.0, ratio_r, 0.0, g_count, ratio, ratio_se, seed));
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

EstimateReport exp_covariance_decay(int d, double u, const std::vector<double>& separations,
                                    std::uint64_t n_lines, std::uint64_t seed,
                                    const ExpOptions& opt) {
  const auto t0 = Clock::now();
  check_dim(d);
  check_nonempty(separations, "separations");
  if (!(u >= 0.0)) fail(Errc::kOutOfRange, "u must be >= 0");
  for (double s : separations)
    if (!(s > 2.0)) fail(Errc::kSeparationTooSmall, fmt::format("separation {} <= 2", s));

  std::vector<std::pair<HitRegion, HitRegion>> pairs;
  for (double s : separations)
    pairs.emplace_back(SinglePoint{Point(d)}, SinglePoint{axis_point(d, s)});
  const auto m = crofton_groups(d, pairs, n_lines, seed, hash_label("covariance-decay"), opt);
  const double base = std::exp(-2.0 * u * unit_ball_volume(d - 1));
  std::vector<std::vector<double>> cov(m.size(), std::vector<double>(separations.size()));
  for (std::size_t g = 0; g < m.size(); ++g)
    for (std::size_t k = 0; k < separations.size(); ++k)
      cov[g][k] = base * std::expm1(u * m[g][k]);

  EstimateReport rep;
  rep.experiment = "covariance-decay";
  rep.master_seed = seed;
  rep.parameters = {{"d", std::to_string(d)},
                    {"u", fmt::format("{:g}", u)},
                    {"separations", join(separations)},
                    {"n", std::to_string(n_lines)},
                    {"groups", std::to_string(opt.groups)}};
  for (std::size_t k = 0; k < separations.size(); ++k) {
    const MeanError c = column(cov, k);
    rep.rows.push_back(row("estimate", "covariance", d, u, separations[k], 0.0, cov.size(), c.mean,
                           c.std_error, seed));
  }
  add_fit(rep, "slope", d, u, 0.0, cov.size(), loglog_slope_jackknife(separations, cov), seed);
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

EstimateReport exp_occupied_crossing(int d, const std::vector<double>& us,
                                     const std::vector<double>& scales,
                                     const std::vector<double>& epsilons, int replicates,
                                     std::uint64_t seed, const ExpOptions& opt) {
  const auto t0 = Clock::now();
  check_dim(d);
  check_replicates(replicates);
  check_nonempty(us, "u");
  check_nonempty(scales, "scales");
  check_nonempty(epsilons, "epsilons");
  for (double u : us)
    if (!(u >= 0.0)) fail(Errc::kOutOfRange, "u must be >= 0");
  for (double e : epsilons) {
    if (!(e > 0.0)) fail(Errc::kOutOfRange, "resolution must be positive");
    if (e > kMaxSliceEps) fail(Errc::kResolutionTooCoarse, "resolution must be <= 0.5");
    for (double a : scales) {
      const double cells = std::pow(2.0 * a / e, 2.0);
      if (!(a > 0.0) || cells > kReachBudget)
        fail(Errc::kBudgetExceeded, fmt::format("scale {} at resolution {} exceeds the budget", a, e));
    }
  }
  const auto grid = run_crossings(d, CrossingKind::kOccupied, us, scales, epsilons, replicates,
                                  seed, hash_label("occupied-crossing"), opt);
  EstimateReport rep;
  rep.experiment = "occupied-crossing";
  rep.master_seed = seed;
  rep.parameters = {{"d", std::to_string(d)},        {"u", join(us)},
                    {"scales", join(scales)},         {"epsilons", join(epsilons)},
                    {"reps", std::to_string(replicates)}};
  crossing_rows(rep, "p_cross", d, us, scales, epsilons, replicates, seed, grid, true);
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

EstimateReport exp_d2_sanity(const std::vector<double>& us, const std::vector<double>& scales,
                             double eps, int replicates, std::uint64_t seed,
                             const ExpOptions& opt) {
  const auto t0 = Clock::now();
  check_replicates(replicates);
  check_nonempty(us, "u");
  check_nonempty(scales, "scales");
  for (double u : us)
    if (!(u >= 0.0)) fail(Errc::kOutOfRange, "u must be >= 0");
  if (!(eps > 0.0)) fail(Errc::kOutOfRange, "resolution must be positive");
  if (eps > kMaxSliceEps) fail(Errc::kResolutionTooCoarse, "resolution must be <= 0.5");
  const std::vector<double> epsilons{eps};
  const auto grid = run_crossings(2, CrossingKind::kVacant, us, scales, epsilons, replicates, seed,
                                  hash_label("d2-sanity"), opt);
  EstimateReport rep;
  rep.experiment = "d2-sanity";
  rep.master_seed = seed;
  rep.parameters = {{"d", "2"},
                    {"u", join(us)},
                    {"scales", join(scales)},
                    {"epsilon", fmt::format("{:g}", eps)},
                    {"reps", std::to_string(replicates)}};
  crossing_rows(rep, "p_vacant_cross", 2, us, scales, epsilons, replicates, seed, grid, false);
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

EstimateReport exp_vacant_reach(int d, const std::vector<double>& us, double R, double eps,
                                int replicates, std::uint64_t seed, ReachMode mode,
                                const ExpOptions& opt) {
  const auto t0 = Clock::now();
  check_dim(d);
  check_replicates(replicates);
  check_nonempty(us, "u");
  for (double u : us)
    if (!(u >= 0.0)) fail(Errc::kOutOfRange, "u must be >= 0");
  if (!(eps > 0.0) || !(R > 0.25)) fail(Errc::kOutOfRange, "need eps > 0 and R > 1/4");
  const int n = static_cast<int>(std::ceil(2.0 * R / eps - 1e-9));
  const int gd = mode == ReachMode::kPlane ? 2 : d;
  if (static_cast<double>(gd) * std::pow(static_cast<double>(n), gd) > kReachBudget)
    fail(Errc::kBudgetExceeded, "grid exceeds the cell budget");

  std::vector<std::size_t> order(us.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return us[a] > us[b]; });
  const std::uint64_t stream = hash_label("vacant-reach");
  const Point origin(d);
  const Ball from{origin, 0.25};
  std::vector<std::vector<double>> ind(static_cast<std::size_t>(replicates),
                                       std::vector<double>(us.size()));
  parallel_for(static_cast<std::size_t>(replicates), opt.threads, [&](std::size_t r) {
    LineProcessSample cur = sample_process(WindowSpec{origin, R}, us[order.front()], seed, r, stream);
    for (std::size_t step = 0; step < order.size(); ++step) {
      const std::size_t ui = order[step];
      if (step > 0) cur = thin_process(cur, us[ui], splitmix64(seed ^ splitmix64(stream + step)));
      ind[r][ui] = vacant_component_reaches(cur, from, R, eps, mode) ? 1.0 : 0.0;
      if (step > 0 && ind[r][ui] < ind[r][order[step - 1]])
        fail(Errc::kInvariantViolated,
             fmt::format("coupled vacant reach not monotone (replicate {})", r));
    }
  });

  EstimateReport rep;
  rep.experiment = "vacant-reach";
  rep.master_seed = seed;
  rep.parameters = {{"d", std::to_string(d)},
                    {"u", join(us)},
                    {"R", fmt::format("{:g}", R)},
                    {"epsilon", fmt::format("{:g}", eps)},
                    {"mode", mode == ReachMode::kFull ? "full" : "plane"},
                    {"reps", std::to_string(replicates)}};
  for (std::size_t ui = 0; ui < us.size(); ++ui) {
    const MeanError m = column(ind, ui);
    rep.rows.push_back(row("estimate", "p_reach", d, us[ui], R, eps,
                           static_cast<std::uint64_t>(replicates), m.mean, m.std_error, seed));
  }
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

EstimateReport exp_triangle_contrast(int d, double u, const std::vector<double>& as,
                                     int replicates, std::uint64_t seed, std::uint64_t m1_pairs,
                                     bool factorized, const ExpOptions& opt) {
  const auto t0 = Clock::now();
  check_dim(d);
  if (d < 3) fail(Errc::kOutOfRange, "triangle contrast needs d >= 3");
  check_replicates(replicates);
  check_nonempty(as, "a");
  if (!(u >= 0.0)) fail(Errc::kOutOfRange, "u must be >= 0");
  for (double a : as)
    if (!(a >= 9.0)) fail(Errc::kOutOfRange, fmt::format("triangle scale {} < 9", a));

  const std::uint64_t stream = hash_label("triangle-contrast");
  std::vector<std::array<std::array<Segment, 2>, 3>> segs;
  for (double a : as) segs.push_back(TriangleEventSpec{a, d}.segments());

  std::vector<std::vector<double>> ind(static_cast<std::size_t>(replicates),
                                       std::vector<double>(as.size()));
  parallel_for(static_cast<std::size_t>(replicates), opt.threads, [&](std::size_t r) {
    for (std::size_t k = 0; k < as.size(); ++k) {
      const double a = as[k];
      if (!factorized) {
        const auto sample =
            sample_process(WindowSpec{Point(d), a + 1.0}, u, seed, r, splitmix64(stream + k));
        ind[r][k] = triangle_event(sample, TriangleEventSpec{a, d}) ? 1.0 : 0.0;
        continue;
      }
      bool all = true;
      for (int i = 0; i < 3 && all; ++i) {
        const Segment& lo = segs[k][i][0];
        const Segment& hi = segs[k][i][1];
        const WindowSpec w{(lo.a + lo.b) * 0.5, a / 8.0};
        const auto sample =
            sample_process(w, u, seed, r, splitmix64(stream ^ splitmix64(k * 8 + i + 1)));
        const Point far_mid = (hi.a + hi.b) * 0.5;
        const double reach = a / 8.0 + 1.0;
        bool found = false;
        for (const auto& l : sample.lines)
          if (dist_line_point(l, far_mid) <= reach && cylinder_hits(l, hi) &&
              cylinder_hits(l, lo)) {
            found = true;
            break;
          }
        all = found;
      }
      ind[r][k] = all ? 1.0 : 0.0;
    }
  });

  std::vector<std::pair<HitRegion, HitRegion>> pairs;
  for (const auto& s : segs) pairs.emplace_back(s[0][0], s[0][1]);
  const auto m1 = crofton_groups(d, pairs, m1_pairs, seed, splitmix64(stream + 99), opt);

  EstimateReport rep;
  rep.experiment = "triangle-contrast";
  rep.master_seed = seed;
  rep.parameters = {{"d", std::to_string(d)},
                    {"u", fmt::format("{:g}", u)},
                    {"a", join(as)},
                    {"reps", std::to_string(replicates)},
                    {"m1_pairs", std::to_string(m1_pairs)},
                    {"sampling", factorized ? "factorized" : "full-window"}};
  const auto reps = static_cast<std::uint64_t>(replicates);
  for (std::size_t k = 0; k < as.size(); ++k) {
    const MeanError m = column(ind, k);
    rep.rows.push_back(row("estimate", "p_triangle", d, u, as[k], 0.0, reps, m.mean, m.std_error, seed));
  }
  add_fit(rep, "slope", d, u, 0.0, reps, loglog_slope_jackknife(as, ind), seed);
  for (std::size_t k = 0; k < as.size(); ++k) {
    const MeanError m = column(m1, k);
    rep.rows.push_back(row("m1", "m1", d, u, as[k], 0.0, m1.size(), m.mean, m.std_error, seed));
  }
  add_fit(rep, "m1_slope", d, u, 0.0, m1.size(), loglog_slope_jackknife(as, m1), seed);
  if (as.size() >= 2) {
    const MeanError first = column(m1, 0), last = column(m1, as.size() - 1);
    const double ratio = last.mean / first.mean;
    const double se = ratio * std::hypot(last.std_error / last.mean, first.std_error / first.mean);
    rep.rows.push_back(row("ratio", "m1_ratio", d, u, as.back(), 0.0, m1.size(), ratio, se, seed));
  }
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

}  // namespace pcyl
