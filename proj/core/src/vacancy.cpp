#include "pcyl/vacancy.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <string>

#include "pcyl/errors.hpp"
#include "pcyl/parallel.hpp"

namespace pcyl {
namespace {

// Sorted roots of c2 x^2 + c1 x + c0 = 0, c2 > 0, or nothing.
std::optional<std::pair<double, double>> quad_roots(double c2, double c1, double c0) {
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (c1 + std::copysign(sq, c1));
  double r1, r2;
  if (q == 0.0) {
    r1 = r2 = -c1 / (2.0 * c2);
  } else {
    r1 = q / c2;
    r2 = c0 / q;
  }
  if (r1 > r2) std::swap(r1, r2);
  return std::make_pair(r1, r2);
}

// Marks cells i in [0, n) whose centers x0 + i*eps satisfy f(x) <= 1 where
// f(x) = c2 x^2 + c1 x + c0 is the squared distance along a grid row.
// Cells next to the interval ends go through the exact predicate.
template <class Mark, class Exact>
void mark_row(double c2, double c1, double c0, double x0, double eps, int n, Mark&& mark,
              Exact&& exact) {
  if (c2 < 1e-12) {
    for (int i = 0; i < n; ++i)
      if (exact(i)) mark(i);
    return;
  }
  const auto roots = quad_roots(c2, c1, c0 - 1.0);
  if (!roots) return;
  const double lim = static_cast<double>(n) + 2.0;
  const long lo = static_cast<long>(std::clamp(std::ceil((roots->first - x0) / eps), -2.0, lim));
  const long hi = static_cast<long>(std::clamp(std::floor((roots->second - x0) / eps), -2.0, lim));
  const long first = std::max<long>(0, lo - 1);
  const long last = std::min<long>(n - 1, hi + 1);
  for (long i = first; i <= last; ++i) {
    if (i <= lo + 1 || i >= hi - 1) {
      if (exact(static_cast<int>(i))) mark(static_cast<int>(i));
    } else {
      mark(static_cast<int>(i));
    }
  }
}

// Row range [j0, j1] of cells possibly touched by the trace of `line`.
std::pair<int, int> trace_rows(const ConicObstacle& trace, const SliceGrid& g) {
  double yc = 0.0, ext = 0.0;
  if (const auto* e = std::get_if<Ellipse>(&trace)) {
    const double s = std::sin(e->angle), c = std::cos(e->angle);
    yc = e->center[1];
    ext = std::sqrt(e->semi_major * e->semi_major * s * s + e->semi_minor * e->semi_minor * c * c);
  } else if (std::holds_alternative<Strip>(trace)) {
    return {0, g.ny - 1};
  } else {
    return {1, 0};
  }
  const double jlo = std::floor((yc - ext - g.y0) / g.eps) - 1.0;
  const double jhi = std::ceil((yc + ext - g.y0) / g.eps) + 1.0;
  const int j0 = static_cast<int>(std::max(0.0, jlo));
  const int j1 = static_cast<int>(std::min<double>(g.ny - 1, jhi));
  return {j0, j1};
}

void rasterize_plane(const std::vector<CanonicalLine>& lines, const PlaneSpec& plane,
                     SliceGrid& g, int threads) {
  g.occupied.assign(static_cast<std::size_t>(g.nx) * g.ny, 0);
  if (lines.empty() || g.nx == 0 || g.ny == 0) return;
  std::vector<ConicObstacle> traces;
  traces.reserve(lines.size());
  for (const auto& l : lines) traces.push_back(trace_on_plane(l, plane));

  const int bands = std::min(g.ny, std::max(1, threads) * 4);
  parallel_for(static_cast<std::size_t>(bands), threads, [&](std::size_t b) {
    const int band_lo = static_cast<int>(static_cast<long>(g.ny) * b / bands);
    const int band_hi = static_cast<int>(static_cast<long>(g.ny) * (b + 1) / bands) - 1;
    for (std::size_t k = 0; k < lines.size(); ++k) {
      auto [j0, j1] = trace_rows(traces[k], g);
      j0 = std::max(j0, band_lo);
      j1 = std::min(j1, band_hi);
      if (j0 > j1) continue;
      const CanonicalLine& line = lines[k];
      const Vec& v = line.direction.vec();
      const Vec w0 = plane.offset - line.anchor;
      const double g0 = dot(w0, v);
      const double w00 = w0[0], w01 = w0[1];
      const double nw0 = norm2(w0);
      const double c2 = 1.0 - v[0] * v[0];
      for (int j = j0; j <= j1; ++j) {
        const double y = g.y0 + j * g.eps;
        const double gy = g0 + y * v[1];
        const double c1 = 2.0 * w00 - 2.0 * v[0] * gy;
        const double c0 = nw0 + 2.0 * y * w01 + y * y - gy * gy;
        std::uint8_t* row = g.occupied.data() + static_cast<std::size_t>(j) * g.nx;
        mark_row(
            c2, c1, c0, g.x0, g.eps, g.nx, [&](int i) { row[i] = 1; },
            [&](int i) {
              return row[i] || dist_line_point(line, plane.embed(g.x0 + i * g.eps, y)) <= 1.0;
            });
      }
    }
  });
}

SliceGrid make_grid(double cx, double cy, double halfwidth, double eps) {
  SliceGrid g;
  g.eps = eps;
  const int n = std::max(1, static_cast<int>(std::ceil(2.0 * halfwidth / eps - 1e-9)));
  g.nx = g.ny = n;
  g.x0 = cx - 0.5 * (n - 1) * eps;
  g.y0 = cy - 0.5 * (n - 1) * eps;
  return g;
}

void check_eps(double eps) {
  if (!(eps > 0.0)) fail(Errc::kOutOfRange, "resolution must be positive");
  if (eps > kMaxSliceEps) fail(Errc::kResolutionTooCoarse, "resolution must be <= 0.5");
}

double box_point_min_dist2(const double* q, const double* c, int d, double h) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    const double t = std::max(0.0, std::abs(q[i] - c[i]) - h);
    s += t * t;
  }
  return s;
}

double box_point_max_dist2(const double* q, const double* c, int d, double h) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    const double t = std::abs(q[i] - c[i]) + h;
    s += t * t;
  }
  return s;
}

// Breadth-first search over `passable` cells; neighbours(index, fn) visits
// adjacent indices. Returns true once a target cell is dequeued.
template <class Neighbours, class IsTarget>
bool bfs(std::vector<std::uint8_t>& state, const std::vector<std::size_t>& starts,
         Neighbours&& neighbours, IsTarget&& is_target) {
  // state: 0 = blocked, 1 = open, 2 = visited
  std::deque<std::size_t> queue;
  for (std::size_t s : starts) {
    if (state[s] != 1) continue;
    state[s] = 2;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    if (is_target(cur)) return true;
    neighbours(cur, [&](std::size_t nb) {
      if (state[nb] == 1) {
        state[nb] = 2;
        queue.push_back(nb);
      }
    });
  }
  return false;
}

}  // namespace

std::size_t SliceGrid::occupied_count() const {
  return static_cast<std::size_t>(std::count(occupied.begin(), occupied.end(), 1));
}

bool is_point_vacant(const Point& p, const LineProcessSample& sample) {
  if (p.dim() != sample.window.dim())
    fail(Errc::kDimensionMismatch, "point dimension differs from sample");
  if (distance(p, sample.window.center) > sample.window.radius + kGeomTol)
    fail(Errc::kVacancyUndefined, "point lies outside the sample window");
  for (const auto& l : sample.lines)
    if (dist_line_point(l, p) <= 1.0) return false;
  return true;
}

PlanarSliceOccupancy build_slice(const LineProcessSample& sample, const PlaneSpec& plane,
                                 const PlanarSquare& square, double eps, int threads) {
  check_eps(eps);
  const int d = sample.window.dim();
  if (plane.dim() != d) fail(Errc::kDimensionMismatch, "plane dimension differs from sample");
  validate_region(PlanarSquare{plane, square.cx, square.cy, square.halfwidth});
  for (int sx : {-1, 1})
    for (int sy : {-1, 1}) {
      const Point corner =
          plane.embed(square.cx + sx * square.halfwidth, square.cy + sy * square.halfwidth);
      if (distance(corner, sample.window.center) > sample.window.radius + kGeomTol)
        fail(Errc::kWindowTooSmall, "slice square leaves the sample window");
    }

  PlanarSliceOccupancy out;
  out.plane = plane;
  out.square = PlanarSquare{plane, square.cx, square.cy, square.halfwidth};
  out.master_seed = sample.master_seed;
  out.replicate_index = sample.replicate_index;
  for (const auto& l : sample.lines) {
    ConicObstacle t = trace_on_plane(l, plane);
    if (!std::holds_alternative<EmptyTrace>(t)) out.obstacles.push_back(t);
  }
  SliceGrid g = make_grid(square.cx, square.cy, square.halfwidth, eps);
  rasterize_plane(sample.lines, plane, g, threads);
  out.grid = std::move(g);
  return out;
}

bool PlanarRegion::meets_cell(double x, double y, double h) const {
  const double dx = std::abs(x - cx), dy = std::abs(y - cy);
  if (shape == Shape::kSquare) {
    if (dx > r + h || dy > r + h) return false;
    if (!boundary_only) return true;
    return !(dx + h < r && dy + h < r);
  }
  const double ex = std::max(0.0, dx - h), ey = std::max(0.0, dy - h);
  if (ex * ex + ey * ey > r * r) return false;
  if (!boundary_only) return true;
  return (dx + h) * (dx + h) + (dy + h) * (dy + h) >= r * r;
}

CrossingQuery annulus_crossing(CrossingKind kind, double cx, double cy, double a) {
  return CrossingQuery{kind, PlanarRegion::square(cx, cy, a / 10.0),
                       PlanarRegion::square_boundary(cx, cy, a)};
}

bool has_crossing(const PlanarSliceOccupancy& slice, const CrossingQuery& query) {
  if (!slice.grid) fail(Errc::kInvalidRegion, "slice has no grid");
  const SliceGrid& g = *slice.grid;
  const std::uint8_t want = query.kind == CrossingKind::kOccupied ? 1 : 0;
  const double h = 0.5 * g.eps;
  std::vector<std::uint8_t> state(g.occupied.size());
  std::vector<std::size_t> starts;
  std::vector<std::uint8_t> target(g.occupied.size(), 0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * g.nx + i;
      state[idx] = g.occupied[idx] == want ? 1 : 0;
      if (!state[idx]) continue;
      const auto c = g.center(i, j);
      if (query.from.meets_cell(c[0], c[1], h)) starts.push_back(idx);
      if (query.to.meets_cell(c[0], c[1], h)) target[idx] = 1;
    }
  const bool eight = query.kind == CrossingKind::kOccupied;
  const int nx = g.nx, ny = g.ny;
  return bfs(
      state, starts,
      [&](std::size_t idx, auto&& visit) {
        const int i = static_cast<int>(idx % nx), j = static_cast<int>(idx / nx);
        for (int dj = -1; dj <= 1; ++dj)
          for (int di = -1; di <= 1; ++di) {
            if (di == 0 && dj == 0) continue;
            if (!eight && di != 0 && dj != 0) continue;
            const int a = i + di, b = j + dj;
            if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
            visit(static_cast<std::size_t>(b) * nx + a);
          }
      },
      [&](std::size_t idx) { return target[idx] != 0; });
}

std::array<std::array<Segment, 2>, 3> TriangleEventSpec::segments() const {
  if (!(a > 0.0)) fail(Errc::kOutOfRange, "triangle scale must be positive");
  if (d < 2 || d > kMaxDim) fail(Errc::kOutOfRange, "dimension must be in [2, 8]");
  std::array<std::array<Segment, 2>, 3> out;
  const double x = 0.5 * std::sqrt(3.0) * a;
  for (int i = 0; i < 3; ++i) {
    const double th = 2.0 * std::numbers::pi * i / 3.0;
    const double cs = std::cos(th), sn = std::sin(th);
    auto rot = [&](double px, double py) {
      Point p(d);
      p[0] = px * cs - py * sn;
      p[1] = px * sn + py * cs;
      return p;
    };
    for (int s = 0; s < 2; ++s) {
      const double sx = s == 0 ? -x : x;
      out[i][s] = Segment{rot(sx, -0.5 * a), rot(sx, -0.25 * a)};
    }
  }
  return out;
}

bool triangle_event(const LineProcessSample& sample, const TriangleEventSpec& spec) {
  if (spec.d != sample.window.dim())
    fail(Errc::kDimensionMismatch, "triangle spec dimension differs from sample");
  const auto segs = spec.segments();
  const double limit = sample.window.radius - 1.0 + kGeomTol;
  for (const auto& pair : segs)
    for (const auto& s : pair)
      if (distance(s.a, sample.window.center) > limit || distance(s.b, sample.window.center) > limit)
        fail(Errc::kWindowTooSmall, "window must contain the segments with margin 1");
  for (const auto& pair : segs) {
    bool found = false;
    for (const auto& l : sample.lines) {
      if (cylinder_hits(l, pair[0]) && cylinder_hits(l, pair[1])) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool vacant_component_reaches(const LineProcessSample& sample, const Ball& from, double R,
                              double eps, ReachMode mode, int threads) {
  const int d = sample.window.dim();
  const Point& c = sample.window.center;
  if (!(eps > 0.0)) fail(Errc::kOutOfRange, "resolution must be positive");
  if (!(R > 0.0)) fail(Errc::kOutOfRange, "reach radius must be positive");
  if (from.center.dim() != d) fail(Errc::kDimensionMismatch, "from-ball dimension");
  if (R > sample.window.radius + kGeomTol)
    fail(Errc::kWindowTooSmall, "reach radius exceeds the sample window");
  if (!region_inside_ball(from, Ball{c, R}))
    fail(Errc::kNotContained, "from-ball must lie inside B(center, R)");

  const int n = std::max(1, static_cast<int>(std::ceil(2.0 * R / eps - 1e-9)));
  const int gd = mode == ReachMode::kPlane ? 2 : d;
  if (static_cast<double>(gd) * std::pow(static_cast<double>(n), gd) > kReachBudget)
    fail(Errc::kBudgetExceeded, "grid exceeds the cell budget");
  const double h = 0.5 * eps;
  const double R2 = R * R;

  if (mode == ReachMode::kPlane) {
    PlaneSpec plane{c};
    plane.offset[0] = 0.0;
    plane.offset[1] = 0.0;
    SliceGrid g = make_grid(c[0], c[1], R, eps);
    rasterize_plane(sample.lines, plane, g, threads);
    // the from-ball meets the plane in a disc
    double off2 = 0.0;
    for (int i = 2; i < d; ++i) off2 += (from.center[i] - c[i]) * (from.center[i] - c[i]);
    const double fr2 = from.radius * from.radius - off2;
    if (fr2 < 0.0) return false;
    const PlanarRegion src = PlanarRegion::disc(from.center[0], from.center[1], std::sqrt(fr2));
    const double cc[2] = {c[0], c[1]};
    std::vector<std::uint8_t> state(g.occupied.size(), 0);
    std::vector<std::uint8_t> target(g.occupied.size(), 0);
    std::vector<std::size_t> starts;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const std::size_t idx = static_cast<std::size_t>(j) * g.nx + i;
        const auto q = g.center(i, j);
        const double qq[2] = {q[0], q[1]};
        if (g.occupied[idx] || box_point_min_dist2(qq, cc, 2, 0.0) > R2) continue;
        state[idx] = 1;
        if (src.meets_cell(q[0], q[1], h)) starts.push_back(idx);
        if (box_point_max_dist2(qq, cc, 2, h) >= R2) target[idx] = 1;
      }
    const int nx = g.nx, ny = g.ny;
    return bfs(
        state, starts,
        [&](std::size_t idx, auto&& visit) {
          const int i = static_cast<int>(idx % nx), j = static_cast<int>(idx / nx);
          if (i > 0) visit(idx - 1);
          if (i + 1 < nx) visit(idx + 1);
          if (j > 0) visit(idx - nx);
          if (j + 1 < ny) visit(idx + nx);
        },
        [&](std::size_t idx) { return target[idx] != 0; });
  }

  // Full d-dimensional grid, cell centers c + (idx - (n-1)/2) eps per axis.
  std::size_t total = 1;
  std::array<std::size_t, kMaxDim> stride{};
  for (int k = 0; k < d; ++k) {
    stride[k] = total;
    total *= static_cast<std::size_t>(n);
  }
  const double base = -0.5 * (n - 1) * eps;
  auto coord = [&](int axis, long idx) { return c[axis] + base + idx * eps; };
  std::vector<std::uint8_t> occ(total, 0);

  for (const auto& line : sample.lines) {
    const Vec& v = line.direction.vec();
    int k = 0;
    for (int i = 1; i < d; ++i)
      if (std::abs(v[i]) > std::abs(v[k])) k = i;
    const double off = dist_line_point(line, c);
    if (off > R + 1.0) continue;
    const double tc = dot(c - line.anchor, v);
    const double half = std::sqrt(std::max(0.0, (R + 1.0) * (R + 1.0) - off * off));
    const Point p1 = line.at(tc - half), p2 = line.at(tc + half);
    std::array<long, kMaxDim> lo{}, hi{}, cur{};
    bool empty = false;
    for (int j = 0; j < d; ++j) {
      if (j == k) continue;
      const double a = std::min(p1[j], p2[j]) - 1.0, b = std::max(p1[j], p2[j]) + 1.0;
      lo[j] = std::max<long>(0, static_cast<long>(std::floor((a - c[j] - base) / eps)));
      hi[j] = std::min<long>(n - 1, static_cast<long>(std::ceil((b - c[j] - base) / eps)));
      if (lo[j] > hi[j]) empty = true;
      cur[j] = lo[j];
    }
    if (empty) continue;
    const double c2 = 1.0 - v[k] * v[k];
    for (;;) {
      Point q(d);
      std::size_t off_idx = 0;
      for (int j = 0; j < d; ++j) {
        if (j == k) continue;
        q[j] = coord(j, cur[j]);
        off_idx += static_cast<std::size_t>(cur[j]) * stride[j];
      }
      q[k] = 0.0;
      const Vec w = q - line.anchor;
      const double wv = dot(w, v);
      const double c1 = 2.0 * (w[k] - v[k] * wv);
      const double c0 = norm2(w) - wv * wv;
      mark_row(
          c2, c1, c0, c[k] + base, eps, n,
          [&](int i) { occ[off_idx + static_cast<std::size_t>(i) * stride[k]] = 1; },
          [&](int i) {
            if (occ[off_idx + static_cast<std::size_t>(i) * stride[k]]) return true;
            Point r = q;
            r[k] = coord(k, i);
            return dist_line_point(line, r) <= 1.0;
          });
      int j = 0;
      for (; j < d; ++j) {
        if (j == k) continue;
        if (++cur[j] <= hi[j]) break;
        cur[j] = lo[j];
      }
      if (j == d) break;
    }
  }

  std::vector<std::uint8_t> state(total, 0);
  std::vector<std::uint8_t> target(total, 0);
  std::vector<std::size_t> starts;
  std::array<long, kMaxDim> ix{};
  std::array<double, kMaxDim> q{}, fc{};
  for (int j = 0; j < d; ++j) fc[j] = from.center[j];
  const double fr2 = from.radius * from.radius;
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (int j = 0; j < d; ++j) {
      ix[j] = static_cast<long>(rem % n);
      rem /= n;
      q[j] = coord(j, ix[j]);
    }
    if (occ[idx] || box_point_min_dist2(q.data(), c.coords().data(), d, 0.0) > R2) continue;
    state[idx] = 1;
    if (box_point_min_dist2(q.data(), fc.data(), d, h) <= fr2) starts.push_back(idx);
    if (box_point_max_dist2(q.data(), c.coords().data(), d, h) >= R2) target[idx] = 1;
  }
  return bfs(
      state, starts,
      [&](std::size_t idx, auto&& visit) {
        std::size_t rem = idx;
        for (int j = 0; j < d; ++j) {
          const long i = static_cast<long>(rem % n);
          rem /= n;
          if (i > 0) visit(idx - stride[j]);
          if (i + 1 < n) visit(idx + stride[j]);
        }
      },
      [&](std::size_t idx) { return target[idx] != 0; });
}

}  // namespace pcyl
