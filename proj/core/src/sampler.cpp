#include "pcyl/sampler.hpp"

#include <cmath>
#include <numbers>

#include "pcyl/errors.hpp"
#include "pcyl/measure.hpp"

namespace pcyl {
namespace {

constexpr std::uint64_t kThinStream = 0x7468696e5f70726full;  // "thin_pro"

void check_window(const WindowSpec& w) {
  if (w.dim() < 2 || w.dim() > kMaxDim)
    fail(Errc::kOutOfRange, "window dimension must be in [2, 8]");
  if (!(w.radius > 0.0) || !all_finite(w.center))
    fail(Errc::kOutOfRange, "window radius must be positive");
}

}  // namespace

double expected_line_count(const WindowSpec& window, double u) {
  return u * mu_hit_ball_exact(window.dim(), window.radius).value;
}

CanonicalLine draw_line(CounterRng& rng, const Point& center, double offset_radius) {
  const int d = center.dim();
  const Vec dir = uniform_direction(rng, d);
  Vec g(d);
  double gn = 0.0;
  while (gn <= 1e-12) {
    for (int i = 0; i < d; ++i) g[i] = standard_normal(rng);
    g -= dir * dot(g, dir);
    gn = norm(g);
  }
  const double radius = offset_radius * std::pow(rng.uniform01(), 1.0 / (d - 1));
  return canonicalize_line(center + g * (radius / gn), dir);
}

LineProcessSample sample_process(const WindowSpec& window, double u, std::uint64_t master_seed,
                                 std::uint64_t replicate_index, std::uint64_t stream) {
  check_window(window);
  if (!(u >= 0.0) || !std::isfinite(u)) fail(Errc::kOutOfRange, "intensity u must be >= 0");
  LineProcessSample out{window, u, {}, master_seed, replicate_index};
  if (u == 0.0) return out;
  CounterRng rng(SeedDerivation{master_seed, stream, replicate_index, 0});
  const std::int64_t count = poisson(rng, expected_line_count(window, u));
  out.lines.reserve(static_cast<std::size_t>(count));
  const double rp1 = window.envelope_radius();
  for (std::int64_t i = 0; i < count; ++i) out.lines.push_back(draw_line(rng, window.center, rp1));
  return out;
}

LineProcessSample thin_process(const LineProcessSample& sample, double u_low, std::uint64_t seed) {
  if (!(u_low >= 0.0)) fail(Errc::kOutOfRange, "u_low must be >= 0");
  if (u_low > sample.u) fail(Errc::kIntensityOrder, "thinning needs u_low <= u");
  LineProcessSample out{sample.window, u_low, {}, sample.master_seed, sample.replicate_index};
  if (u_low == sample.u) {
    out.lines = sample.lines;
    return out;
  }
  if (u_low == 0.0) return out;
  const double keep = u_low / sample.u;
  CounterRng rng(SeedDerivation{seed, kThinStream, sample.replicate_index, 0});
  for (const auto& line : sample.lines)
    if (rng.uniform01() < keep) out.lines.push_back(line);
  return out;
}

LineProcessSample restrict_to_subwindow(const LineProcessSample& sample, const WindowSpec& sub) {
  check_window(sub);
  if (sub.dim() != sample.window.dim())
    fail(Errc::kDimensionMismatch, "subwindow dimension differs from sample");
  if (distance(sub.center, sample.window.center) + sub.radius > sample.window.radius + kGeomTol)
    fail(Errc::kNotContained, "subwindow is not inside the sample window");
  LineProcessSample out{sub, sample.u, {}, sample.master_seed, sample.replicate_index};
  const double reach = sub.radius + 1.0;
  for (const auto& line : sample.lines)
    if (dist_line_point(line, sub.center) <= reach) out.lines.push_back(line);
  return out;
}

}  // namespace pcyl
