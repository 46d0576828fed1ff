#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "pcyl/geometry.hpp"
#include "pcyl/sampler.hpp"

namespace pcyl {

/// True iff p lies outside every cylinder of the sample. Throws
/// VacancyUndefined when p is outside the sample window.
bool is_point_vacant(const Point& p, const LineProcessSample& sample);

/// Cells of side eps; cell (i, j) has center (x0 + i eps, y0 + j eps) in plane
/// coordinates. Row-major, 1 = occupied.
struct SliceGrid {
  double eps = 0.1;
  int nx = 0;
  int ny = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  std::vector<std::uint8_t> occupied;

  bool at(int i, int j) const { return occupied[static_cast<std::size_t>(j) * nx + i] != 0; }
  std::array<double, 2> center(int i, int j) const { return {x0 + i * eps, y0 + j * eps}; }
  std::size_t occupied_count() const;
};

struct PlanarSliceOccupancy {
  PlaneSpec plane;
  PlanarSquare square;
  std::vector<ConicObstacle> obstacles;
  std::optional<SliceGrid> grid;
  std::uint64_t master_seed = 0;
  std::uint64_t replicate_index = 0;
};

inline constexpr double kMaxSliceEps = 0.5;

/// Rasterizes the traces of all sample cylinders on `plane` over `square`.
/// A cell is occupied iff its center is within distance 1 of some line.
/// Rows are split across `threads` workers. Throws ResolutionTooCoarse for
/// eps > 0.5 and WindowTooSmall if the square leaves the window.
PlanarSliceOccupancy build_slice(const LineProcessSample& sample, const PlaneSpec& plane,
                                 const PlanarSquare& square, double eps, int threads = 1);

enum class CrossingKind { kVacant, kOccupied };

/// A closed planar square S(c, r) or disc B(c, r), or only its boundary.
struct PlanarRegion {
  enum class Shape { kSquare, kDisc };
  Shape shape = Shape::kSquare;
  double cx = 0.0;
  double cy = 0.0;
  double r = 1.0;
  bool boundary_only = false;

  static PlanarRegion square(double cx, double cy, double r) {
    return {Shape::kSquare, cx, cy, r, false};
  }
  static PlanarRegion square_boundary(double cx, double cy, double r) {
    return {Shape::kSquare, cx, cy, r, true};
  }
  static PlanarRegion disc(double cx, double cy, double r) { return {Shape::kDisc, cx, cy, r, false}; }
  static PlanarRegion circle(double cx, double cy, double r) { return {Shape::kDisc, cx, cy, r, true}; }

  /// Whether the closed cell [x +- h] x [y +- h] meets the region.
  bool meets_cell(double x, double y, double h) const;
};

/// Vacant queries use 4-connectivity on vacant cells, occupied queries
/// 8-connectivity on occupied cells.
struct CrossingQuery {
  CrossingKind kind = CrossingKind::kOccupied;
  PlanarRegion from;
  PlanarRegion to;
};

/// Query for the event "S(c, a/10) is connected to the boundary of S(c, a)".
CrossingQuery annulus_crossing(CrossingKind kind, double cx, double cy, double a);

bool has_crossing(const PlanarSliceOccupancy& slice, const CrossingQuery& query);

/// Segments S_i^-(a), S_i^+(a) in the coordinate plane: S_1^{+-} =
/// {+-(sqrt 3 / 2) a} x [-a/2, -a/4], the others rotated by 2pi/3 and 4pi/3.
struct TriangleEventSpec {
  double a = 27.0;
  int d = 3;

  std::array<std::array<Segment, 2>, 3> segments() const;
};

/// Exact test: for every i some line's cylinder hits both S_i^- and S_i^+.
/// Throws WindowTooSmall unless the window contains all segments with
/// margin 1.
bool triangle_event(const LineProcessSample& sample, const TriangleEventSpec& spec);

enum class ReachMode { kPlane, kFull };

/// Grid vacant reachability from cells meeting `from` to cells meeting the
/// sphere of radius R around the window center. Cells with centers inside
/// B(center, R) are used. Plane mode works in the coordinate plane through the
/// center with 4-connectivity; full mode uses the d-dimensional grid with
/// 2d-connectivity and a d (2R/eps)^d <= 1e9 budget (BudgetExceeded).
bool vacant_component_reaches(const LineProcessSample& sample, const Ball& from, double R,
                              double eps, ReachMode mode, int threads = 1);

inline constexpr double kReachBudget = 1e9;

}  // namespace pcyl
