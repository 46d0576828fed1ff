#pragma once

#include <cstdint>
#include <vector>

#include "pcyl/geometry.hpp"
#include "pcyl/rng.hpp"

namespace pcyl {

/// Ball window W = B(center, radius). Lines whose offset from the center is at
/// most radius + 1 are exactly the lines whose cylinders meet W.
struct WindowSpec {
  Point center;
  double radius = 1.0;

  int dim() const { return center.dim(); }
  double envelope_radius() const { return radius + 1.0; }
};

/// One realization of the Poisson line process restricted to L_W.
struct LineProcessSample {
  WindowSpec window;
  double u = 0.0;
  std::vector<CanonicalLine> lines;
  std::uint64_t master_seed = 0;
  std::uint64_t replicate_index = 0;
};

/// Expected number of lines meeting a ball window: u * kappa_{d-1} (R+1)^{d-1}.
double expected_line_count(const WindowSpec& window, double u);

/// Draws one line from the normalized invariant measure restricted to the
/// lines passing within `offset_radius` of `center`: uniform direction on
/// S^{d-1}, then a uniform offset in the orthogonal (d-1)-disc.
CanonicalLine draw_line(CounterRng& rng, const Point& center, double offset_radius);

/// Samples the process at intensity u on the window. `stream` separates
/// experiments sharing a master seed.
LineProcessSample sample_process(const WindowSpec& window, double u, std::uint64_t master_seed,
                                 std::uint64_t replicate_index, std::uint64_t stream = 0);

/// Independent Bernoulli(u_low / u) retention of each line; the result is a
/// subset of the input and is distributed as a fresh sample at u_low.
LineProcessSample thin_process(const LineProcessSample& sample, double u_low,
                               std::uint64_t seed);

/// Keeps the lines whose cylinders meet the ball `sub`, which must lie inside
/// the sample window.
LineProcessSample restrict_to_subwindow(const LineProcessSample& sample, const WindowSpec& sub);

}  // namespace pcyl
