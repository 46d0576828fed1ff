#include <gtest/gtest.h>

#include <cmath>

#include "pcyl/errors.hpp"
#include "pcyl/sampler.hpp"
#include "pcyl/stats.hpp"
#include "pcyl/vacancy.hpp"

namespace pcyl {
namespace {

LineProcessSample manual(int d, double R, std::vector<CanonicalLine> lines) {
  LineProcessSample s;
  s.window = WindowSpec{Vec(d), R};
  s.u = 1.0;
  s.lines = std::move(lines);
  return s;
}

PlanarSliceOccupancy slice_of(const LineProcessSample& s, double half, double eps) {
  const PlaneSpec plane = PlaneSpec::through_origin(s.window.dim());
  return build_slice(s, plane, PlanarSquare{plane, 0, 0, half}, eps);
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::kParse;
}

TEST(PointVacancy, Examples) {
  const auto empty = manual(3, 3.0, {});
  EXPECT_TRUE(is_point_vacant(Point{0.5, 1, -1}, empty));
  const auto axis = manual(3, 3.0, {canonicalize_line(Point{0, 0, 0}, Vec{1, 0, 0})});
  EXPECT_FALSE(is_point_vacant(Point{0, 0.5, 0}, axis));
  EXPECT_TRUE(is_point_vacant(Point{0, 1.5, 0}, axis));
  EXPECT_EQ(code_of([&] { is_point_vacant(Point{0, 4, 0}, axis); }), Errc::kVacancyUndefined);
}

TEST(Slice, EmptySampleAllVacant) {
  const auto s = slice_of(manual(3, 10.0, {}), 5.0, 0.1);
  ASSERT_TRUE(s.grid);
  EXPECT_EQ(s.grid->occupied_count(), 0u);
  EXPECT_EQ(s.grid->nx, 100);
}

TEST(Slice, PerpendicularLineGivesDisc) {
  const double eps = 0.1;
  const auto s = slice_of(manual(3, 10.0, {canonicalize_line(Point{0, 0, 0}, Vec{0, 0, 1})}), 5.0, eps);
  const double expected = M_PI / (eps * eps);
  EXPECT_LT(std::abs(static_cast<double>(s.grid->occupied_count()) - expected), 2.0 * M_PI / eps);
}

TEST(Slice, CellsMatchCenterTest) {
  for (int d : {3, 4}) {
    const auto sample = sample_process(WindowSpec{Vec(d), 8.0}, 0.3, 21, d);
    PlaneSpec plane = PlaneSpec::through_origin(d);
    plane.offset[d - 1] = 0.3;
    const auto s = build_slice(sample, plane, PlanarSquare{plane, 0.5, -0.5, 4.0}, 0.07, 3);
    const SliceGrid& g = *s.grid;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const auto c = g.center(i, j);
        bool occ = false;
        for (const auto& l : sample.lines) occ = occ || dist_line_point(l, plane.embed(c[0], c[1])) <= 1.0;
        ASSERT_EQ(g.at(i, j), occ) << d << " " << i << " " << j;
      }
  }
}

TEST(Slice, OccupancyMarginalAndHomogeneity) {
  const double half = 10.0;
  std::vector<double> frac, q_left, q_right;
  for (int r = 0; r < 60; ++r) {
    const auto sample = sample_process(WindowSpec{Vec(3), half * std::sqrt(2.0)}, 0.1, 22, r);
    const auto s = slice_of(sample, half, 0.5);
    const SliceGrid& g = *s.grid;
    frac.push_back(static_cast<double>(g.occupied_count()) / (g.nx * g.ny));
    double left = 0, right = 0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) (i < g.nx / 2 ? left : right) += g.at(i, j);
    q_left.push_back(left / (g.nx * g.ny / 2));
    q_right.push_back(right / (g.nx * g.ny / 2));
  }
  const MeanError m = mean_error(frac);
  EXPECT_NEAR(m.mean, 1.0 - std::exp(-0.1 * M_PI), 3.0 * m.std_error);
  std::vector<double> diff;
  for (std::size_t i = 0; i < q_left.size(); ++i) diff.push_back(q_left[i] - q_right[i]);
  const MeanError md = mean_error(diff);
  EXPECT_LT(std::abs(md.mean), 4.0 * md.std_error);
}

TEST(Slice, Errors) {
  const auto s = manual(3, 5.0, {});
  EXPECT_EQ(code_of([&] { slice_of(s, 2.0, 0.6); }), Errc::kResolutionTooCoarse);
  EXPECT_EQ(code_of([&] { slice_of(s, 4.0, 0.1); }), Errc::kWindowTooSmall);
}

TEST(Crossing, Examples) {
  const auto empty = slice_of(manual(3, 15.0, {}), 10.0, 0.1);
  EXPECT_TRUE(has_crossing(empty, annulus_crossing(CrossingKind::kVacant, 0, 0, 10)));
  EXPECT_FALSE(has_crossing(empty, annulus_crossing(CrossingKind::kOccupied, 0, 0, 10)));
  const auto strip = slice_of(manual(3, 15.0, {canonicalize_line(Point{0, 0, 0}, Vec{1, 0, 0})}), 10.0, 0.1);
  EXPECT_TRUE(has_crossing(strip, annulus_crossing(CrossingKind::kOccupied, 0, 0, 10)));
  // A ring of lines around the inner square blocks every vacant path.
  std::vector<CanonicalLine> box;
  for (double c : {-3.0, 3.0}) {
    box.push_back(canonicalize_line(Point{c, 0, 0}, Vec{0, 1, 0}));
    box.push_back(canonicalize_line(Point{0, c, 0}, Vec{1, 0, 0}));
  }
  const auto ring = slice_of(manual(3, 15.0, box), 10.0, 0.1);
  EXPECT_FALSE(has_crossing(ring, annulus_crossing(CrossingKind::kVacant, 0, 0, 10)));
}

TEST(Crossing, PathwiseMonotoneWhenAddingLines) {
  for (int r = 0; r < 20; ++r) {
    auto sample = sample_process(WindowSpec{Vec(3), 10.0 * std::sqrt(2.0)}, 0.15, 23, r);
    const auto before = slice_of(sample, 10.0, 0.2);
    CounterRng rng(SeedDerivation{23, 1, static_cast<std::uint64_t>(r), 0});
    sample.lines.push_back(draw_line(rng, Vec(3), 5.0));
    const auto after = slice_of(sample, 10.0, 0.2);
    const auto occ = annulus_crossing(CrossingKind::kOccupied, 0, 0, 10);
    const auto vac = annulus_crossing(CrossingKind::kVacant, 0, 0, 10);
    if (has_crossing(before, occ)) EXPECT_TRUE(has_crossing(after, occ));
    if (!has_crossing(before, vac)) EXPECT_FALSE(has_crossing(after, vac));
  }
}

TEST(Triangle, EmptyAndConstructed) {
  const TriangleEventSpec spec{27.0, 3};
  EXPECT_FALSE(triangle_event(manual(3, 29.0, {}), spec));
  std::vector<CanonicalLine> lines;
  for (const auto& pair : spec.segments()) {
    const Point m0 = (pair[0].a + pair[0].b) * 0.5;
    const Point m1 = (pair[1].a + pair[1].b) * 0.5;
    lines.push_back(canonicalize_line(m0, m1 - m0));
  }
  EXPECT_TRUE(triangle_event(manual(3, 29.0, lines), spec));
  lines.pop_back();
  EXPECT_FALSE(triangle_event(manual(3, 29.0, lines), spec));
  EXPECT_EQ(code_of([&] { triangle_event(manual(3, 20.0, {}), spec); }), Errc::kWindowTooSmall);
}

TEST(Triangle, MatchesBruteForce) {
  const TriangleEventSpec spec{27.0, 3};
  int hits = 0;
  for (int r = 0; r < 40; ++r) {
    const auto s = sample_process(WindowSpec{Vec(3), 28.0}, 20.0, 24, r);
    bool all = true;
    for (const auto& pair : spec.segments()) {
      bool any = false;
      for (const auto& l : s.lines) any = any || (cylinder_hits(l, pair[0]) && cylinder_hits(l, pair[1]));
      all = all && any;
    }
    EXPECT_EQ(triangle_event(s, spec), all);
    hits += all;
  }
  SUCCEED() << hits;
}

TEST(Reach, EmptyReaches) {
  for (auto mode : {ReachMode::kPlane, ReachMode::kFull})
    EXPECT_TRUE(vacant_component_reaches(manual(3, 5.0, {}), Ball{Vec(3), 0.25}, 5.0, 0.25, mode));
}

TEST(Reach, HighIntensityBlocks) {
  int reached = 0;
  for (int r = 0; r < 20; ++r) {
    const auto s = sample_process(WindowSpec{Vec(3), 5.0}, 50.0, 25, r);
    reached += vacant_component_reaches(s, Ball{Vec(3), 0.25}, 5.0, 0.25, ReachMode::kFull);
  }
  EXPECT_EQ(reached, 0);
}

TEST(Reach, MonotoneUnderThinning) {
  for (int r = 0; r < 20; ++r) {
    const auto s = sample_process(WindowSpec{Vec(3), 5.0}, 0.6, 26, r);
    const auto t = thin_process(s, 0.2, splitmix64(r));
    const bool full = vacant_component_reaches(s, Ball{Vec(3), 0.25}, 5.0, 0.25, ReachMode::kFull);
    const bool thin = vacant_component_reaches(t, Ball{Vec(3), 0.25}, 5.0, 0.25, ReachMode::kFull, 2);
    if (full) EXPECT_TRUE(thin);
  }
}

TEST(Reach, Errors) {
  const auto s = manual(4, 12.0, {});
  EXPECT_EQ(code_of([&] { vacant_component_reaches(s, Ball{Vec(4), 0.25}, 12.0, 0.01, ReachMode::kFull); }),
            Errc::kBudgetExceeded);
  EXPECT_EQ(code_of([&] { vacant_component_reaches(s, Ball{Vec(4), 0.25}, 13.0, 0.25, ReachMode::kFull); }),
            Errc::kWindowTooSmall);
}

}  // namespace
}  // namespace pcyl
