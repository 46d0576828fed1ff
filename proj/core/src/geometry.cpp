#include "pcyl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pcyl/errors.hpp"

namespace pcyl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ball_volume(int m) {
  if (m == 0) return 1.0;
  return std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

void require_dim(int a, int b, const char* where) {
  if (a != b)
    fail(Errc::kDimensionMismatch,
         std::string(where) + ": " + std::to_string(a) + " vs " + std::to_string(b));
}

// f(t) = c0 + c1 t + c2 t^2 restricted to [t0, t1]; one piece of the squared
// distance from base + t*dir to a polyhedral-ish region.
struct Piece {
  double t0, t1;
  double c0, c1, c2;
};

struct Profile {
  std::array<Piece, 2 * kMaxDim + 1> pieces;
  int count = 0;
  void push(const Piece& p) { pieces[count++] = p; }
};

Profile box_profile(const Point& x, const Vec& v, const Point& lo, const Point& hi) {
  const int d = x.dim();
  std::array<double, 2 * kMaxDim> breaks{};
  int nb = 0;
  for (int i = 0; i < d; ++i) {
    if (v[i] == 0.0) continue;
    breaks[nb++] = (lo[i] - x[i]) / v[i];
    breaks[nb++] = (hi[i] - x[i]) / v[i];
  }
  std::sort(breaks.begin(), breaks.begin() + nb);

  Profile prof;
  for (int k = 0; k <= nb; ++k) {
    const double t0 = k == 0 ? -kInf : breaks[k - 1];
    const double t1 = k == nb ? kInf : breaks[k];
    double tm;
    if (nb == 0) tm = 0.0;
    else if (k == 0) tm = t1 - 1.0;
    else if (k == nb) tm = t0 + 1.0;
    else tm = 0.5 * (t0 + t1);
    Piece pc{t0, t1, 0.0, 0.0, 0.0};
    for (int i = 0; i < d; ++i) {
      const double p = x[i] + tm * v[i];
      double alpha, beta;
      if (p < lo[i]) {
        alpha = lo[i] - x[i];
        beta = -v[i];
      } else if (p > hi[i]) {
        alpha = x[i] - hi[i];
        beta = v[i];
      } else {
        continue;
      }
      pc.c0 += alpha * alpha;
      pc.c1 += 2.0 * alpha * beta;
      pc.c2 += beta * beta;
    }
    prof.push(pc);
  }
  return prof;
}

Profile segment_profile(const Point& x, const Vec& v, const Point& a, const Point& b) {
  const Vec ab = b - a;
  const double len = norm(ab);
  const Vec u = ab * (1.0 / len);
  const Vec wa = x - a;
  const Vec wb = x - b;
  const double pi0 = dot(wa, u);
  const double pi1 = dot(v, u);

  const Piece below{-kInf, kInf, norm2(wa), 2.0 * dot(wa, v), 1.0};
  const Piece above{-kInf, kInf, norm2(wb), 2.0 * dot(wb, v), 1.0};
  const Piece inside{-kInf, kInf, norm2(wa) - pi0 * pi0, 2.0 * dot(wa, v) - 2.0 * pi0 * pi1,
                     1.0 - pi1 * pi1};

  Profile prof;
  if (pi1 == 0.0) {
    if (pi0 < 0.0) prof.push(below);
    else if (pi0 > len) prof.push(above);
    else prof.push(inside);
    return prof;
  }
  const double ta = -pi0 / pi1;
  const double tb = (len - pi0) / pi1;
  auto with = [](Piece p, double t0, double t1) {
    p.t0 = t0;
    p.t1 = t1;
    return p;
  };
  if (pi1 > 0.0) {
    prof.push(with(below, -kInf, ta));
    prof.push(with(inside, ta, tb));
    prof.push(with(above, tb, kInf));
  } else {
    prof.push(with(above, -kInf, tb));
    prof.push(with(inside, tb, ta));
    prof.push(with(below, ta, kInf));
  }
  return prof;
}

// Minimizer of one quadratic piece over its interval.
double piece_argmin(const Piece& p) {
  if (p.c2 > 0.0) return std::clamp(-p.c1 / (2.0 * p.c2), p.t0, p.t1);
  const bool lo_finite = std::isfinite(p.t0);
  const bool hi_finite = std::isfinite(p.t1);
  if (!lo_finite && !hi_finite) return 0.0;
  if (!lo_finite) return p.t1;
  if (!hi_finite) return p.t0;
  const double f0 = p.c0 + p.c1 * p.t0;
  const double f1 = p.c0 + p.c1 * p.t1;
  return f0 <= f1 ? p.t0 : p.t1;
}

// {t in [t0, t1] : c2 t^2 + c1 t + c0 <= 0}
std::optional<std::pair<double, double>> solve_le(double c2, double c1, double c0, double t0,
                                                  double t1) {
  double lo, hi;
  if (c2 > 0.0) {
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc < 0.0) return std::nullopt;
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (c1 + std::copysign(sq, c1));
    if (q == 0.0) {
      lo = hi = 0.0;
    } else {
      const double r1 = q / c2;
      const double r2 = c0 / q;
      lo = std::min(r1, r2);
      hi = std::max(r1, r2);
    }
  } else if (c1 != 0.0) {
    const double root = -c0 / c1;
    if (c1 > 0.0) {
      lo = -kInf;
      hi = root;
    } else {
      lo = root;
      hi = kInf;
    }
  } else {
    if (c0 > 0.0) return std::nullopt;
    lo = -kInf;
    hi = kInf;
  }
  lo = std::max(lo, t0);
  hi = std::min(hi, t1);
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

std::optional<std::pair<double, double>> profile_sublevel(const Profile& prof, double r2) {
  std::optional<std::pair<double, double>> out;
  for (int k = 0; k < prof.count; ++k) {
    const Piece& p = prof.pieces[k];
    auto iv = solve_le(p.c2, p.c1, p.c0 - r2, p.t0, p.t1);
    if (!iv) continue;
    if (!out) out = iv;
    else out = std::make_pair(std::min(out->first, iv->first), std::max(out->second, iv->second));
  }
  return out;
}

std::optional<std::pair<double, double>> ball_chord(const Point& x, const Vec& v, const Point& c,
                                                    double radius) {
  const Vec w = x - c;
  return solve_le(1.0, 2.0 * dot(w, v), norm2(w) - radius * radius, -kInf, kInf);
}

double dist_point_box(const Point& p, const Point& lo, const Point& hi) {
  double s = 0.0;
  for (int i = 0; i < p.dim(); ++i) {
    const double e = std::max({0.0, lo[i] - p[i], p[i] - hi[i]});
    s += e * e;
  }
  return std::sqrt(s);
}

double dist_point_segment(const Point& p, const Point& a, const Point& b) {
  const Vec ab = b - a;
  const double l2 = norm2(ab);
  const double s = std::clamp(dot(p - a, ab) / l2, 0.0, 1.0);
  return distance(p, a + ab * s);
}

// min over t of dist(x + t v, region) for the piecewise-quadratic regions,
// evaluated with the direct point distance at each piece minimizer.
template <class DistFn>
double profile_min(const Profile& prof, const Point& x, const Vec& v, DistFn&& dist) {
  double best = kInf;
  for (int k = 0; k < prof.count; ++k) {
    const double t = piece_argmin(prof.pieces[k]);
    best = std::min(best, dist(x + v * t));
  }
  return best;
}

}  // namespace

UnitVector UnitVector::canonical(const Vec& raw) {
  const double n = norm(raw);
  if (!(n > kUnitNormTol)) fail(Errc::kZeroDirection, "direction norm <= 1e-12");
  Vec v = raw * (1.0 / n);
  for (int i = 0; i < v.dim(); ++i) {
    if (std::abs(v[i]) > kUnitNormTol) {
      if (v[i] < 0.0) v *= -1.0;
      break;
    }
  }
  return UnitVector(v);
}

UnitVector UnitVector::stored(const Vec& v) {
  if (all_finite(v) && std::abs(norm(v) - 1.0) <= kUnitNormTol) {
    for (int i = 0; i < v.dim(); ++i) {
      if (std::abs(v[i]) > kUnitNormTol) {
        if (v[i] > 0.0) return UnitVector(v);
        break;
      }
    }
  }
  return canonical(v);
}

CanonicalLine canonicalize_line(const Point& point_on_line, const Vec& raw_direction) {
  require_dim(point_on_line.dim(), raw_direction.dim(), "canonicalize_line");
  if (!all_finite(point_on_line) || !all_finite(raw_direction))
    fail(Errc::kInvalidRegion, "canonicalize_line: non-finite input");
  const UnitVector dir = UnitVector::canonical(raw_direction);
  Point anchor = point_on_line - dir.vec() * dot(point_on_line, dir.vec());
  return CanonicalLine{dir, anchor};
}

int region_dim(const HitRegion& region) {
  return std::visit(
      [](const auto& r) -> int {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Ball>) return r.center.dim();
        else if constexpr (std::is_same_v<T, AxisBox>) return r.min.dim();
        else if constexpr (std::is_same_v<T, PlanarSquare>) return r.plane.dim();
        else if constexpr (std::is_same_v<T, Segment>) return r.a.dim();
        else return r.p.dim();
      },
      region);
}

void validate_region(const HitRegion& region) {
  std::visit(
      [](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Ball>) {
          if (!all_finite(r.center) || !(r.radius >= 0.0) || !std::isfinite(r.radius))
            fail(Errc::kInvalidRegion, "Ball needs finite center and radius >= 0");
        } else if constexpr (std::is_same_v<T, AxisBox>) {
          require_dim(r.min.dim(), r.max.dim(), "AxisBox");
          for (int i = 0; i < r.min.dim(); ++i)
            if (!(r.min[i] <= r.max[i]) || !std::isfinite(r.min[i]) || !std::isfinite(r.max[i]))
              fail(Errc::kInvalidRegion, "AxisBox needs finite min <= max");
        } else if constexpr (std::is_same_v<T, PlanarSquare>) {
          if (r.plane.dim() < 2) fail(Errc::kInvalidRegion, "PlanarSquare needs d >= 2");
          if (r.plane.offset[0] != 0.0 || r.plane.offset[1] != 0.0)
            fail(Errc::kInvalidRegion, "plane offset must vanish in the spanned coordinates");
          if (!(r.halfwidth > 0.0) || !std::isfinite(r.cx) || !std::isfinite(r.cy))
            fail(Errc::kInvalidRegion, "PlanarSquare needs halfwidth > 0");
        } else if constexpr (std::is_same_v<T, Segment>) {
          require_dim(r.a.dim(), r.b.dim(), "Segment");
          if (!all_finite(r.a) || !all_finite(r.b))
            fail(Errc::kInvalidRegion, "Segment endpoints must be finite");
          if (r.a == r.b) fail(Errc::kInvalidRegion, "degenerate Segment; use SinglePoint");
        } else {
          if (!all_finite(r.p)) fail(Errc::kInvalidRegion, "SinglePoint must be finite");
        }
      },
      region);
}

HitRegion make_segment(const Point& a, const Point& b) {
  if (a == b) return SinglePoint{a};
  return Segment{a, b};
}

AxisBox as_box(const PlanarSquare& s) {
  AxisBox box{s.plane.offset, s.plane.offset};
  box.min[0] = s.cx - s.halfwidth;
  box.max[0] = s.cx + s.halfwidth;
  box.min[1] = s.cy - s.halfwidth;
  box.max[1] = s.cy + s.halfwidth;
  return box;
}

Ball bounding_ball(const HitRegion& region) {
  return std::visit(
      [](const auto& r) -> Ball {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return r;
        } else if constexpr (std::is_same_v<T, AxisBox>) {
          return Ball{(r.min + r.max) * 0.5, 0.5 * distance(r.min, r.max)};
        } else if constexpr (std::is_same_v<T, PlanarSquare>) {
          return Ball{r.plane.embed(r.cx, r.cy), r.halfwidth * std::numbers::sqrt2};
        } else if constexpr (std::is_same_v<T, Segment>) {
          return Ball{(r.a + r.b) * 0.5, 0.5 * distance(r.a, r.b)};
        } else {
          return Ball{r.p, 0.0};
        }
      },
      region);
}

bool region_inside_ball(const HitRegion& region, const Ball& ball, double tol) {
  require_dim(region_dim(region), ball.center.dim(), "region_inside_ball");
  auto inside = [&](const Point& p) { return distance(p, ball.center) <= ball.radius + tol; };
  return std::visit(
      [&](const auto& r) -> bool {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return distance(r.center, ball.center) + r.radius <= ball.radius + tol;
        } else if constexpr (std::is_same_v<T, AxisBox> || std::is_same_v<T, PlanarSquare>) {
          AxisBox box;
          if constexpr (std::is_same_v<T, AxisBox>) box = r;
          else box = as_box(r);
          const int d = box.min.dim();
          std::array<int, kMaxDim> free{};
          int nfree = 0;
          for (int i = 0; i < d; ++i)
            if (box.min[i] < box.max[i]) free[nfree++] = i;
          for (unsigned mask = 0; mask < (1u << nfree); ++mask) {
            Point corner = box.min;
            for (int k = 0; k < nfree; ++k)
              if (mask & (1u << k)) corner[free[k]] = box.max[free[k]];
            if (!inside(corner)) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, Segment>) {
          return inside(r.a) && inside(r.b);
        } else {
          return inside(r.p);
        }
      },
      region);
}

double dist_line_point(const CanonicalLine& line, const Point& p) {
  require_dim(line.dim(), p.dim(), "dist_line_point");
  Vec w = p - line.anchor;
  w -= line.direction.vec() * dot(w, line.direction.vec());
  return norm(w);
}

double dist_point_region(const Point& p, const HitRegion& region) {
  require_dim(p.dim(), region_dim(region), "dist_point_region");
  return std::visit(
      [&](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return std::max(0.0, distance(p, r.center) - r.radius);
        } else if constexpr (std::is_same_v<T, AxisBox>) {
          return dist_point_box(p, r.min, r.max);
        } else if constexpr (std::is_same_v<T, PlanarSquare>) {
          const AxisBox b = as_box(r);
          return dist_point_box(p, b.min, b.max);
        } else if constexpr (std::is_same_v<T, Segment>) {
          return dist_point_segment(p, r.a, r.b);
        } else {
          return distance(p, r.p);
        }
      },
      region);
}

double dist_line_region(const CanonicalLine& line, const HitRegion& region) {
  require_dim(line.dim(), region_dim(region), "dist_line_region");
  const Point& x = line.anchor;
  const Vec& v = line.direction.vec();
  return std::visit(
      [&](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return std::max(0.0, dist_line_point(line, r.center) - r.radius);
        } else if constexpr (std::is_same_v<T, AxisBox> || std::is_same_v<T, PlanarSquare>) {
          AxisBox box;
          if constexpr (std::is_same_v<T, AxisBox>) box = r;
          else box = as_box(r);
          const Profile prof = box_profile(x, v, box.min, box.max);
          return profile_min(prof, x, v,
                             [&](const Point& q) { return dist_point_box(q, box.min, box.max); });
        } else if constexpr (std::is_same_v<T, Segment>) {
          const Profile prof = segment_profile(x, v, r.a, r.b);
          return profile_min(prof, x, v,
                             [&](const Point& q) { return dist_point_segment(q, r.a, r.b); });
        } else {
          return dist_line_point(line, r.p);
        }
      },
      region);
}

bool cylinder_hits(const CanonicalLine& line, const HitRegion& region) {
  return dist_line_region(line, region) <= 1.0;
}

std::optional<std::pair<double, double>> chord_interval(const Point& base, const Vec& dir,
                                                        const HitRegion& region, double radius) {
  require_dim(base.dim(), region_dim(region), "chord_interval");
  const double r2 = radius * radius;
  return std::visit(
      [&](const auto& r) -> std::optional<std::pair<double, double>> {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return ball_chord(base, dir, r.center, r.radius + radius);
        } else if constexpr (std::is_same_v<T, AxisBox>) {
          return profile_sublevel(box_profile(base, dir, r.min, r.max), r2);
        } else if constexpr (std::is_same_v<T, PlanarSquare>) {
          const AxisBox b = as_box(r);
          return profile_sublevel(box_profile(base, dir, b.min, b.max), r2);
        } else if constexpr (std::is_same_v<T, Segment>) {
          return profile_sublevel(segment_profile(base, dir, r.a, r.b), r2);
        } else {
          return ball_chord(base, dir, r.p, radius);
        }
      },
      region);
}

double neighbourhood_volume(const HitRegion& region, double radius) {
  const int d = region_dim(region);
  auto steiner = [&](std::span<const double> sides) {
    // elementary symmetric polynomials of the side lengths
    std::array<double, kMaxDim + 1> e{};
    e[0] = 1.0;
    for (double s : sides)
      for (int j = static_cast<int>(sides.size()); j >= 1; --j) e[j] += e[j - 1] * s;
    double vol = 0.0;
    for (int j = 0; j <= d; ++j) vol += e[j] * ball_volume(d - j) * std::pow(radius, d - j);
    return vol;
  };
  return std::visit(
      [&](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return ball_volume(d) * std::pow(r.radius + radius, d);
        } else if constexpr (std::is_same_v<T, AxisBox> || std::is_same_v<T, PlanarSquare>) {
          AxisBox box;
          if constexpr (std::is_same_v<T, AxisBox>) box = r;
          else box = as_box(r);
          std::array<double, kMaxDim> sides{};
          for (int i = 0; i < d; ++i) sides[i] = box.max[i] - box.min[i];
          return steiner(std::span<const double>(sides.data(), d));
        } else if constexpr (std::is_same_v<T, Segment>) {
          return ball_volume(d) * std::pow(radius, d) +
                 distance(r.a, r.b) * ball_volume(d - 1) * std::pow(radius, d - 1);
        } else {
          return ball_volume(d) * std::pow(radius, d);
        }
      },
      region);
}

ConicObstacle trace_on_plane(const CanonicalLine& line, const PlaneSpec& plane) {
  require_dim(line.dim(), plane.dim(), "trace_on_plane");
  const int d = line.dim();
  const Vec& v = line.direction.vec();
  const Point& a = line.anchor;

  double sin2 = 0.0, pout2 = 0.0, beta = 0.0;
  for (int i = 2; i < d; ++i) {
    const double p = a[i] - plane.offset[i];
    sin2 += v[i] * v[i];
    pout2 += p * p;
    beta += p * v[i];
  }
  const double c = std::hypot(v[0], v[1]);

  if (std::sqrt(sin2) <= kParallelThreshold) {
    const double h2 = pout2;
    if (h2 >= 1.0) return EmptyTrace{};
    return Strip{{a[0], a[1]}, std::atan2(v[1], v[0]), std::sqrt(1.0 - h2)};
  }

  const double h2 = std::max(0.0, pout2 - beta * beta / sin2);
  if (h2 >= 1.0) return EmptyTrace{};
  const double minor = std::sqrt(1.0 - h2);
  Ellipse e;
  e.semi_minor = minor;
  e.semi_major = minor / std::sqrt(sin2);
  if (c > 0.0) {
    const double ux = v[0] / c, uy = v[1] / c;
    const double t = -c * beta / sin2;
    e.center = {a[0] + t * ux, a[1] + t * uy};
    e.angle = std::atan2(uy, ux);
  } else {
    e.center = {a[0], a[1]};
  }
  return e;
}

bool obstacle_contains(const ConicObstacle& obstacle, double x, double y) {
  return std::visit(
      [&](const auto& o) -> bool {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, Ellipse>) {
          const double dx = x - o.center[0], dy = y - o.center[1];
          const double cs = std::cos(o.angle), sn = std::sin(o.angle);
          const double along = (dx * cs + dy * sn) / o.semi_major;
          const double across = (-dx * sn + dy * cs) / o.semi_minor;
          return along * along + across * across <= 1.0;
        } else if constexpr (std::is_same_v<T, Strip>) {
          const double dx = x - o.point[0], dy = y - o.point[1];
          return std::abs(-dx * std::sin(o.angle) + dy * std::cos(o.angle)) <= o.halfwidth;
        } else {
          return false;
        }
      },
      obstacle);
}

}  // namespace pcyl
