#pragma once

#include <array>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "pcyl/vec.hpp"

namespace pcyl {

/// Tolerances shared by the geometry layer.
inline constexpr double kUnitNormTol = 1e-12;
inline constexpr double kGeomTol = 1e-9;
inline constexpr double kParallelThreshold = 1e-9;

using Point = Vec;

/// A unit vector in canonical sign: the first coordinate with |x| > 1e-12 is
/// positive, so a line's two directions collapse to one representative.
class UnitVector {
 public:
  UnitVector() = default;

  /// Normalizes and sign-canonicalizes `raw`. Throws ZeroDirection if
  /// |raw| <= 1e-12.
  static UnitVector canonical(const Vec& raw);
  /// Keeps `v` bit-for-bit when it is already unit (within 1e-12) and in
  /// canonical sign; otherwise behaves like canonical().
  static UnitVector stored(const Vec& v);

  const Vec& vec() const { return v_; }
  int dim() const { return v_.dim(); }
  double operator[](int i) const { return v_[i]; }

 private:
  explicit UnitVector(const Vec& v) : v_(v) {}
  Vec v_;
};

/// A line in R^d stored as canonical direction plus the point of the line
/// closest to the origin.
struct CanonicalLine {
  UnitVector direction;
  Point anchor;

  int dim() const { return anchor.dim(); }
  Point at(double t) const { return anchor + direction.vec() * t; }
};

CanonicalLine canonicalize_line(const Point& point_on_line, const Vec& raw_direction);

/// The coordinate 2-plane {x_3 = ... = x_d = 0}, optionally translated by an
/// offset that is zero in the two spanned coordinates.
struct PlaneSpec {
  Vec offset;

  static PlaneSpec through_origin(int dim) { return PlaneSpec{Vec(dim)}; }
  int dim() const { return offset.dim(); }
  Point embed(double x, double y) const {
    Point p = offset;
    p[0] = x;
    p[1] = y;
    return p;
  }
};

struct Ball {
  Point center;
  double radius = 0.0;
};

struct AxisBox {
  Point min;
  Point max;
};

/// Closed l_inf ball of half-width `halfwidth` centred at (cx, cy) in `plane`.
struct PlanarSquare {
  PlaneSpec plane;
  double cx = 0.0;
  double cy = 0.0;
  double halfwidth = 1.0;
};

struct Segment {
  Point a;
  Point b;
};

struct SinglePoint {
  Point p;
};

using HitRegion = std::variant<Ball, AxisBox, PlanarSquare, Segment, SinglePoint>;

int region_dim(const HitRegion& region);
void validate_region(const HitRegion& region);

/// Builds a segment region; coincident endpoints collapse to SinglePoint.
HitRegion make_segment(const Point& a, const Point& b);

/// The square as a (degenerate) axis-aligned box of R^d.
AxisBox as_box(const PlanarSquare& square);

/// Smallest convenient ball containing the region.
Ball bounding_ball(const HitRegion& region);

/// True when the closed region lies inside the closed ball (exact for
/// convex regions: checked on extreme points).
bool region_inside_ball(const HitRegion& region, const Ball& ball, double tol = kGeomTol);

double dist_line_point(const CanonicalLine& line, const Point& p);
double dist_point_region(const Point& p, const HitRegion& region);
double dist_line_region(const CanonicalLine& line, const HitRegion& region);
bool cylinder_hits(const CanonicalLine& line, const HitRegion& region);

/// Parameter interval {t : dist(base + t*dir, region) <= radius} for a unit
/// `dir`; empty optional if the line misses the radius-neighbourhood.
std::optional<std::pair<double, double>> chord_interval(const Point& base, const Vec& dir,
                                                        const HitRegion& region,
                                                        double radius = 1.0);

/// Lebesgue volume of {x : dist(x, region) <= radius} (Steiner formula).
double neighbourhood_volume(const HitRegion& region, double radius = 1.0);

// Planar traces ------------------------------------------------------------

struct Ellipse {
  std::array<double, 2> center{};
  double semi_major = 1.0;
  double semi_minor = 1.0;
  double angle = 0.0;  // direction of the major axis, radians
};

struct Strip {
  std::array<double, 2> point{};
  double angle = 0.0;  // direction of the strip axis
  double halfwidth = 1.0;
};

struct EmptyTrace {};

using ConicObstacle = std::variant<Ellipse, Strip, EmptyTrace>;

/// C(l) intersected with `plane`, in plane coordinates.
ConicObstacle trace_on_plane(const CanonicalLine& line, const PlaneSpec& plane);

bool obstacle_contains(const ConicObstacle& obstacle, double x, double y);

}  // namespace pcyl
