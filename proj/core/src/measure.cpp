#include "pcyl/measure.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pcyl/errors.hpp"
#include "pcyl/parallel.hpp"
#include "pcyl/sampler.hpp"

namespace pcyl {
namespace {

const std::uint64_t kEnvelopeStream = hash_label("envelope");
const std::uint64_t kCroftonStream = hash_label("crofton");

void check_dim(int d) {
  if (d < 2 || d > kMaxDim) fail(Errc::kOutOfRange, "dimension must be in [2, 8]");
}

std::uint64_t batch_count(std::uint64_t n) { return (n + kMcBatch - 1) / kMcBatch; }
std::uint64_t batch_size(std::uint64_t n, std::uint64_t b) {
  return std::min<std::uint64_t>(kMcBatch, n - b * kMcBatch);
}

Point uniform_in_ball(CounterRng& rng, const Point& center, double radius) {
  const int d = center.dim();
  const Vec dir = uniform_direction(rng, d);
  return center + dir * (radius * std::pow(rng.uniform01(), 1.0 / d));
}

}  // namespace

double unit_ball_volume(int m) {
  if (m < 1 || m > kMaxDim) fail(Errc::kOutOfRange, "unit_ball_volume needs 1 <= m <= 8");
  return std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

MeasureValue mu_hit_ball_exact(int d, double radius) {
  check_dim(d);
  if (!(radius >= 0.0)) fail(Errc::kOutOfRange, "ball radius must be >= 0");
  return MeasureValue{unit_ball_volume(d - 1) * std::pow(radius + 1.0, d - 1), 0.0,
                      MeasureMethod::kExact, 0, 0};
}

MeasureValue mu_hit_ball_exact(int d, const Point& center, double radius) {
  if (center.dim() != d) fail(Errc::kDimensionMismatch, "ball center dimension");
  return mu_hit_ball_exact(d, radius);
}

std::vector<MeasureValue> mu_joint_hit_mc_multi(int d, const HitRegion& a,
                                                std::span<const HitRegion> bs,
                                                const Ball& envelope, std::uint64_t n_lines,
                                                std::uint64_t seed, const McOptions& options) {
  check_dim(d);
  if (n_lines == 0) fail(Errc::kOutOfRange, "n_lines must be positive");
  if (envelope.center.dim() != d || region_dim(a) != d)
    fail(Errc::kDimensionMismatch, "regions must live in R^d");
  validate_region(a);
  validate_region(envelope);
  for (const auto& b : bs) {
    if (region_dim(b) != d) fail(Errc::kDimensionMismatch, "regions must live in R^d");
    validate_region(b);
  }
  if (!region_inside_ball(a, envelope))
    fail(Errc::kContainmentViolation, "target is not contained in the envelope ball");

  const std::size_t nb = bs.size();
  const std::uint64_t batches = batch_count(n_lines);
  std::vector<std::uint64_t> counts(batches * nb, 0);
  const double reach = envelope.radius + 1.0;
  const std::uint64_t stream = splitmix64(kEnvelopeStream ^ options.stream);

  parallel_for(batches, options.threads, [&](std::size_t b) {
    CounterRng rng(SeedDerivation{seed, stream, b, 0});
    const std::uint64_t m = batch_size(n_lines, b);
    std::uint64_t* out = counts.data() + b * nb;
    for (std::uint64_t i = 0; i < m; ++i) {
      const CanonicalLine line = draw_line(rng, envelope.center, reach);
      if (!cylinder_hits(line, a)) continue;
      if (dist_line_region(line, envelope) > 1.0 + kGeomTol)
        fail(Errc::kContainmentViolation, "sampled line hits target but not envelope");
      for (std::size_t k = 0; k < nb; ++k)
        if (cylinder_hits(line, bs[k])) ++out[k];
    }
  });

  const double scale = mu_hit_ball_exact(d, envelope.radius).value;
  std::vector<MeasureValue> result(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    std::uint64_t hits = 0;
    for (std::uint64_t b = 0; b < batches; ++b) hits += counts[b * nb + k];
    const double p = static_cast<double>(hits) / static_cast<double>(n_lines);
    result[k] = MeasureValue{scale * p,
                             scale * std::sqrt(p * (1.0 - p) / static_cast<double>(n_lines)),
                             MeasureMethod::kMonteCarlo, n_lines, hits};
  }
  return result;
}

MeasureValue mu_joint_hit_mc(int d, const HitRegion& a, const HitRegion& b, const Ball& envelope,
                             std::uint64_t n_lines, std::uint64_t seed,
                             const McOptions& options) {
  return mu_joint_hit_mc_multi(d, a, std::span<const HitRegion>(&b, 1), envelope, n_lines, seed,
                               options)
      .front();
}

MeasureValue mu_hit_mc(int d, const HitRegion& target, const Ball& envelope,
                       std::uint64_t n_lines, std::uint64_t seed, const McOptions& options) {
  return mu_joint_hit_mc(d, target, target, envelope, n_lines, seed, options);
}

Point sample_neighbourhood(CounterRng& rng, const HitRegion& region) {
  return std::visit(
      [&](const auto& r) -> Point {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return uniform_in_ball(rng, r.center, r.radius + 1.0);
        } else if constexpr (std::is_same_v<T, SinglePoint>) {
          return uniform_in_ball(rng, r.p, 1.0);
        } else if constexpr (std::is_same_v<T, Segment>) {
          const int d = r.a.dim();
          const Vec ab = r.b - r.a;
          const double len = norm(ab);
          const Vec axis = ab * (1.0 / len);
          const double tube = len * unit_ball_volume(d - 1);
          const double caps = unit_ball_volume(d);
          if (rng.uniform01() * (tube + caps) < tube) {
            Vec g(d);
            double gn = 0.0;
            while (gn <= 1e-12) {
              for (int i = 0; i < d; ++i) g[i] = standard_normal(rng);
              g -= axis * dot(g, axis);
              gn = norm(g);
            }
            const double rho = std::pow(rng.uniform01(), 1.0 / (d - 1));
            return r.a + axis * (len * rng.uniform01()) + g * (rho / gn);
          }
          const Point z = uniform_in_ball(rng, Point(d), 1.0);
          return dot(z, axis) < 0.0 ? r.a + z : r.b + z;
        } else {
          AxisBox box;
          if constexpr (std::is_same_v<T, AxisBox>) box = r;
          else box = as_box(r);
          const int d = box.min.dim();
          for (;;) {
            Point p(d);
            for (int i = 0; i < d; ++i)
              p[i] = box.min[i] - 1.0 + (box.max[i] - box.min[i] + 2.0) * rng.uniform01();
            if (dist_point_region(p, region) <= 1.0) return p;
          }
        }
      },
      region);
}

MeasureValue mu_joint_hit_crofton(int d, const HitRegion& a, const HitRegion& b,
                                  std::uint64_t n_pairs, std::uint64_t seed,
                                  const McOptions& options) {
  check_dim(d);
  if (n_pairs < 2) fail(Errc::kOutOfRange, "n_pairs must be at least 2");
  if (region_dim(a) != d || region_dim(b) != d)
    fail(Errc::kDimensionMismatch, "regions must live in R^d");
  validate_region(a);
  validate_region(b);
  const Ball ba = bounding_ball(a);
  const Ball bb = bounding_ball(b);
  if (distance(ba.center, bb.center) < ba.radius + bb.radius + 2.0)
    fail(Errc::kHypothesisViolated, "two-point estimator needs disjoint unit neighbourhoods");

  const double norm_const = 2.0 / (d * unit_ball_volume(d)) * neighbourhood_volume(a) *
                            neighbourhood_volume(b);
  const std::uint64_t batches = batch_count(n_pairs);
  std::vector<double> sums(batches, 0.0), sums2(batches, 0.0);
  const std::uint64_t stream = splitmix64(kCroftonStream ^ options.stream);

  parallel_for(batches, options.threads, [&](std::size_t bi) {
    CounterRng rng(SeedDerivation{seed, stream, bi, 0});
    const std::uint64_t m = batch_size(n_pairs, bi);
    double s = 0.0, s2 = 0.0;
    for (std::uint64_t i = 0; i < m; ++i) {
      const Point x = sample_neighbourhood(rng, a);
      const Point y = sample_neighbourhood(rng, b);
      const Vec diff = y - x;
      const double dist = norm(diff);
      const Vec v = diff * (1.0 / dist);
      const auto ca = chord_interval(x, v, a);
      const auto cb = chord_interval(x, v, b);
      if (!ca || !cb) continue;
      const double la = ca->second - ca->first;
      const double lb = cb->second - cb->first;
      if (!(la > 0.0) || !(lb > 0.0)) continue;
      const double w = norm_const / (std::pow(dist, d - 1) * la * lb);
      s += w;
      s2 += w * w;
    }
    sums[bi] = s;
    sums2[bi] = s2;
  });

  double s = 0.0, s2 = 0.0;
  for (std::uint64_t bi = 0; bi < batches; ++bi) {
    s += sums[bi];
    s2 += sums2[bi];
  }
  const double n = static_cast<double>(n_pairs);
  const double mean = s / n;
  const double var = std::max(0.0, (s2 / n - mean * mean) * n / (n - 1.0));
  return MeasureValue{mean, std::sqrt(var / n), MeasureMethod::kCrofton, n_pairs, 0};
}

double void_probability_exact(int d, double u, double r) {
  if (!(u >= 0.0)) fail(Errc::kOutOfRange, "u must be >= 0");
  return std::exp(-u * mu_hit_ball_exact(d, r).value);
}

CovarianceEstimate point_pair_covariance(int d, double u, double separation,
                                         std::uint64_t n_samples, std::uint64_t seed,
                                         JointEstimator estimator, const McOptions& options) {
  check_dim(d);
  if (!(separation > 2.0))
    fail(Errc::kSeparationTooSmall, "point pair covariance needs |x - y| > 2");
  if (!(u >= 0.0)) fail(Errc::kOutOfRange, "u must be >= 0");
  const Point x(d);
  Point y(d);
  y[0] = separation;
  const HitRegion px = SinglePoint{x};
  const HitRegion py = SinglePoint{y};

  CovarianceEstimate out;
  out.joint = estimator == JointEstimator::kEnvelope
                  ? mu_joint_hit_mc(d, px, py, Ball{x, 0.0}, n_samples, seed, options)
                  : mu_joint_hit_crofton(d, px, py, n_samples, seed, options);
  const double kappa = unit_ball_volume(d - 1);
  const double base = std::exp(-2.0 * u * kappa);
  const double m = out.joint.value;
  out.covariance = base * std::expm1(u * m);
  out.std_error = base * u * std::exp(u * m) * out.joint.std_error;
  return out;
}

}  // namespace pcyl
