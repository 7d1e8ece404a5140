#include <gtest/gtest.h>

#include <set>

#include "dyadic/grid.hpp"
#include "dyadic/lattice.hpp"
#include "dyadic/random.hpp"
#include "dyadic/sampling.hpp"

namespace dyadic {
namespace {

CubeId cube(int level, std::vector<std::int64_t> index) { return CubeId{level, std::move(index)}; }

std::vector<std::int64_t> cells_of(const GridSet& s) { return s.cells(); }

TEST(LatticeTest, Parent) {
  const Lattice l1(1, -4);
  EXPECT_EQ(l1.parent(cube(-1, {0})), cube(0, {0}));
  EXPECT_EQ(l1.parent(cube(-2, {3})), cube(-1, {1}));
  const Lattice l2(2, -4);
  EXPECT_EQ(l2.parent(cube(-3, {5, 2})), cube(-2, {2, 1}));
  try {
    l1.parent(l1.root());
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "no parent in window");
  }
}

TEST(LatticeTest, Children) {
  const Lattice l1(1, -2);
  EXPECT_EQ(l1.children(l1.root()), (std::vector<CubeId>{cube(-1, {0}), cube(-1, {1})}));
  const Lattice l2(2, -2);
  const auto kids = l2.children(l2.root());
  ASSERT_EQ(kids.size(), 4u);
  std::set<std::vector<std::int64_t>> idx;
  for (const auto& k : kids) {
    EXPECT_EQ(k.level, -1);
    EXPECT_EQ(l2.parent(k), l2.root());
    idx.insert(k.index);
  }
  EXPECT_EQ(idx, (std::set<std::vector<std::int64_t>>{{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
  try {
    l1.children(cube(-2, {1}));
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "no children");
  }
}

TEST(LatticeTest, Contains) {
  const Lattice l(1, -3);
  for (const auto& c : l.all_cubes()) EXPECT_TRUE(contains(l.root(), c));
  EXPECT_FALSE(contains(cube(-1, {0}), cube(-1, {1})));
  EXPECT_TRUE(contains(cube(-1, {1}), cube(-2, {2})));
  EXPECT_FALSE(contains(cube(-2, {2}), cube(-1, {1})));
}

TEST(LatticeTest, NestingTrichotomy) {
  const Lattice l(2, -4);
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const CubeId a = random_cube(l, rng);
    const CubeId b = random_cube(l, rng);
    const bool ab = contains(a, b), ba = contains(b, a);
    const bool disjoint = (l.cells(a) & l.cells(b)).empty();
    EXPECT_EQ(static_cast<int>(disjoint) + static_cast<int>(ab || ba), 1) << to_string(a) << " " << to_string(b);
    EXPECT_EQ(overlaps(a, b), !disjoint);
  }
}

TEST(LatticeTest, Cells) {
  const Lattice l(1, -2);
  EXPECT_EQ(cells_of(l.cells(cube(-2, {2}))), (std::vector<std::int64_t>{2}));
  EXPECT_EQ(cells_of(l.cells(l.root())), (std::vector<std::int64_t>{0, 1, 2, 3}));
  EXPECT_EQ(cells_of(l.cells(cube(-1, {0}))), (std::vector<std::int64_t>{0, 1}));
}

TEST(LatticeTest, CellsAreUnionOfChildren) {
  const Lattice l(2, -3);
  for (const auto& c : l.all_cubes()) {
    if (c.level == l.finest_level()) continue;
    GridSet u(l);
    std::int64_t total = 0;
    for (const auto& k : l.children(c)) {
      u |= l.cells(k);
      total += l.cells(k).count();
    }
    EXPECT_EQ(u, l.cells(c));
    EXPECT_EQ(total, l.cells(c).count());
  }
}

TEST(LatticeTest, Triple) {
  const Lattice l(1, -2);
  EXPECT_EQ(cells_of(l.triple(l.root())), (std::vector<std::int64_t>{0, 1, 2, 3}));
  EXPECT_EQ(cells_of(l.triple(cube(-2, {1}))), (std::vector<std::int64_t>{0, 1, 2}));
  EXPECT_EQ(cells_of(l.triple(cube(-2, {0}))), (std::vector<std::int64_t>{0, 1}));
}

TEST(LatticeTest, TripleInTwoDimensions) {
  const Lattice l(2, -2);
  // 3 x 3 block around cell (1, 1).
  EXPECT_EQ(l.triple(cube(-2, {1, 1})).count(), 9);
  EXPECT_EQ(l.triple(cube(-2, {0, 0})).count(), 4);
}

TEST(LatticeTest, BallCells) {
  const Lattice l(1, -2);
  EXPECT_EQ(cells_of(l.ball_cells(Ball{{0.375}, 0.1})), (std::vector<std::int64_t>{1}));
  EXPECT_EQ(cells_of(l.ball_cells(Ball{{0.5}, 0.3})), (std::vector<std::int64_t>{1, 2}));
  EXPECT_EQ(l.ball_cells(Ball{{0.5}, 1.0}).count(), 4);
  const Lattice l2(2, -3);
  EXPECT_EQ(l2.ball_cells(Ball{{0.1, 0.9}, std::sqrt(2.0)}).count(), 64);
}

TEST(LatticeTest, BallCellsOpenBoundary) {
  const Lattice l(1, -2);
  // Centers at 0.125 and 0.625 sit exactly on the sphere of radius 0.25.
  EXPECT_EQ(cells_of(l.ball_cells(Ball{{0.375}, 0.25})), (std::vector<std::int64_t>{1}));
}

TEST(LatticeTest, CoveringCubesForBall) {
  const Lattice l(1, -4);
  const BallCover a = l.covering_cubes_for_ball(Ball{{0.5}, 0.25});
  // 2r = 1/2 sits on the closed end, so side 1/2 and both halves meet the ball.
  EXPECT_EQ(a.level, -1);
  EXPECT_EQ(a.cubes, (std::vector<CubeId>{cube(-1, {0}), cube(-1, {1})}));
  const BallCover b = l.covering_cubes_for_ball(Ball{{0.25}, 0.1});
  EXPECT_EQ(b.level, -2);
  EXPECT_EQ(b.cubes, (std::vector<CubeId>{cube(-2, {0}), cube(-2, {1})}));
}

TEST(LatticeTest, CoveringCubesCoverTheBall) {
  for (int n = 1; n <= 3; ++n) {
    const Lattice l(n, n == 3 ? -3 : -5);
    Rng rng(static_cast<std::uint64_t>(n));
    for (int i = 0; i < 300; ++i) {
      std::vector<double> c(static_cast<std::size_t>(n));
      for (auto& x : c) x = rng.uniform();
      const Ball ball{c, rng.uniform(0.001, 1.5)};
      const BallCover cover = l.covering_cubes_for_ball(ball);
      EXPECT_LE(cover.cubes.size(), std::size_t{1} << n);
      GridSet u(l);
      for (const auto& q : cover.cubes) {
        EXPECT_EQ(q.level, cover.level);
        EXPECT_TRUE((u & l.cells(q)).empty());
        u |= l.cells(q);
      }
      EXPECT_TRUE(l.ball_cells(ball).is_subset_of(u));
    }
  }
}

TEST(LatticeTest, RejectsHugeWindow) {
  EXPECT_THROW(Lattice(1, -25), std::invalid_argument);
  EXPECT_THROW(Lattice(3, -9), std::invalid_argument);
  EXPECT_NO_THROW(Lattice(1, -24));
  EXPECT_THROW(Lattice(1, 1), std::invalid_argument);
  EXPECT_THROW(Lattice(0, -1), std::invalid_argument);
}

TEST(LatticeTest, InvalidCubes) {
  const Lattice l(1, -2);
  EXPECT_FALSE(l.is_valid(cube(-3, {0})));
  EXPECT_FALSE(l.is_valid(cube(-1, {2})));
  EXPECT_FALSE(l.is_valid(cube(-1, {0, 0})));
  EXPECT_THROW(l.validate(cube(-1, {-1})), std::invalid_argument);
}

TEST(LatticeTest, LinearOrderRunsFirstAxisFastest) {
  const Lattice l(2, -2);
  EXPECT_EQ(l.cell_index(1), (std::vector<std::int64_t>{1, 0}));
  EXPECT_EQ(l.cell_index(4), (std::vector<std::int64_t>{0, 1}));
  for (std::int64_t c = 0; c < l.cell_count(); ++c) {
    EXPECT_EQ(l.linear_index(l.cell_index(c)), c);
    EXPECT_EQ(l.to_linear(l.to_morton(c)), c);
  }
}

TEST(LatticeTest, SmallestContainingCube) {
  const Lattice l(1, -3);
  GridSet s(l);
  s.insert(2);
  s.insert(3);
  EXPECT_EQ(l.smallest_cube_containing(s), cube(-2, {1}));
  s.insert(4);
  EXPECT_EQ(l.smallest_cube_containing(s), l.root());
  EXPECT_EQ(l.smallest_cube_containing(GridSet(l)), l.root());
}

TEST(GridSetTest, Algebra) {
  const Lattice l(2, -3);
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const GridSet a = random_set(l, rng), b = random_set(l, rng);
    EXPECT_EQ((a | b).count() + (a & b).count(), a.count() + b.count());
    EXPECT_TRUE((a - b).is_subset_of(a));
    EXPECT_TRUE(((a - b) & b).empty());
    EXPECT_EQ(a.complement().complement(), a);
    EXPECT_EQ((a | a.complement()).count(), l.cell_count());
  }
}

TEST(GridFunctionTest, RejectsNaN) {
  const Lattice l(1, -2);
  GridFunction f(l);
  EXPECT_THROW(f.set(0, std::nan("")), std::invalid_argument);
}

}  // namespace
}  // namespace dyadic
