#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "doctest.h"
#include "lsmat/eval.hpp"
#include "lsmat/rng.hpp"
#include "lsmat/shapes.hpp"

using namespace lsmat;

namespace {

double seg_dist(const Vec2& a, const Vec2& b, const Vec2& q) {
  const Vec2 d = b - a;
  const double t = std::clamp((q - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
  return (q - (a + t * d)).norm();
}

/// Random occupancy grid of a few blobby discs.
BinaryGrid random_grid(int res, Rng& rng) {
  BinaryGrid grid;
  grid.resolution = res;
  grid.scale = 1.0;
  grid.origin = Vec2::Zero();
  grid.occupancy.assign(static_cast<std::size_t>(res) * res, 0);
  const int blobs = 2 + static_cast<int>(rng.next_u64() % 4);
  for (int b = 0; b < blobs; ++b) {
    const double cx = rng.uniform(0, res), cy = rng.uniform(0, res);
    const double r = rng.uniform(2.0, res / 3.0);
    for (int y = 0; y < res; ++y)
      for (int x = 0; x < res; ++x)
        if ((Vec2(x, y) - Vec2(cx, cy)).squaredNorm() <= r * r)
          grid.occupancy[static_cast<std::size_t>(y) * res + x] = 1;
  }
  return grid;
}

/// O(n^2) nearest-free-center scan with the same out-of-grid convention.
std::vector<double> brute_force_dt(const BinaryGrid& grid) {
  const int res = grid.resolution;
  std::vector<double> out(static_cast<std::size_t>(res) * res, 0.0);
  for (int y = 0; y < res; ++y)
    for (int x = 0; x < res; ++x) {
      if (!grid.occupied(x, y)) continue;
      std::int64_t best =
          std::min<std::int64_t>({static_cast<std::int64_t>(x + 1) * (x + 1),
                                  static_cast<std::int64_t>(res - x) * (res - x),
                                  static_cast<std::int64_t>(y + 1) * (y + 1),
                                  static_cast<std::int64_t>(res - y) * (res - y)});
      for (int qy = 0; qy < res; ++qy)
        for (int qx = 0; qx < res; ++qx) {
          if (grid.occupied(qx, qy)) continue;
          const std::int64_t d2 = static_cast<std::int64_t>(qx - x) * (qx - x) +
                                  static_cast<std::int64_t>(qy - y) * (qy - y);
          best = std::min(best, d2);
        }
      out[static_cast<std::size_t>(y) * res + x] = std::sqrt(static_cast<double>(best));
    }
  return out;
}

}  // namespace

TEST_CASE("rasterize fills an exact-fit square completely") {
  const Loop square = {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
  const BinaryGrid grid = rasterize({square}, 128);
  CHECK(grid.interior_count() == 128L * 128L);
}

TEST_CASE("rasterize area matches analytic areas") {
  // 2:1 rectangle occupies half the square grid.
  {
    const Loop rect = {Vec2(0, 0), Vec2(2, 0), Vec2(2, 1), Vec2(0, 1)};
    const BinaryGrid grid = rasterize({rect}, 512);
    const double want = 512.0 * 512.0 / 2.0;
    CHECK(std::abs(grid.interior_count() - want) / want < 0.005);
  }
  // Triangle area ratio.
  {
    const Loop tri = {Vec2(0, 0), Vec2(1, 0), Vec2(0.6, 0.8)};
    const BinaryGrid grid = rasterize({tri}, 512);
    const double want = 0.4 * 512.0 * 512.0;  // bbox 1 x 0.8 fits the long axis
    CHECK(std::abs(grid.interior_count() - want) / want < 0.005);
  }
}

TEST_CASE("rasterize rejects degenerate polygons") {
  CHECK_THROWS_AS(rasterize({{Vec2(0, 0), Vec2(1, 0)}}, 64), Error);
  CHECK_THROWS_AS(rasterize({}, 64), Error);
  const Loop flat = {Vec2(0, 0), Vec2(1, 0), Vec2(2, 0)};
  CHECK_THROWS_AS(rasterize({flat}, 64), Error);
}

TEST_CASE("distance transform geometry cases") {
  // Full square: the center sits half a grid from the virtual free border.
  {
    const Loop square = {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
    const BinaryGrid grid = rasterize({square}, 128);
    const auto dt = distance_transform(grid);
    const double center = dt[static_cast<std::size_t>(64) * 128 + 64];
    CHECK(std::abs(center - 64.0) <= 1.0);
  }
  // A single occupied pixel is at most one pixel from free space.
  {
    BinaryGrid grid;
    grid.resolution = 16;
    grid.occupancy.assign(256, 0);
    grid.occupancy[8 * 16 + 8] = 1;
    const auto dt = distance_transform(grid);
    CHECK(dt[8 * 16 + 8] == doctest::Approx(1.0));
    CHECK(dt[0] == 0.0);  // exterior pixels hold zero
  }
}

TEST_CASE("distance transform equals brute force on random 64^2 grids") {
  Rng rng(321);
  for (int trial = 0; trial < 20; ++trial) {
    const BinaryGrid grid = random_grid(64, rng);
    const auto got = distance_transform(grid);
    const auto want = brute_force_dt(grid);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) REQUIRE(got[i] == want[i]);
  }
}

TEST_CASE("medial pixels of a rectangle match the analytic skeleton") {
  const BinaryGrid grid = rasterize(make_rectangle(64).boundary_loops, 1024);
  const GroundTruthAxis gt = extract_medial_pixels(grid);
  REQUIRE_FALSE(gt.medial_points.empty());
  const double px = 1.0 / grid.scale;

  // Rectangle [-1,1] x [-0.5,0.5]: central segment plus four corner
  // diagonals.
  const std::vector<std::pair<Vec2, Vec2>> segments = {
      {Vec2(-0.5, 0), Vec2(0.5, 0)},  {Vec2(-1, -0.5), Vec2(-0.5, 0)},
      {Vec2(-1, 0.5), Vec2(-0.5, 0)}, {Vec2(1, -0.5), Vec2(0.5, 0)},
      {Vec2(1, 0.5), Vec2(0.5, 0)},
  };
  double worst_to_axis = 0.0;
  for (const Vec2& m : gt.medial_points) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [a, b] : segments) best = std::min(best, seg_dist(a, b, m));
    worst_to_axis = std::max(worst_to_axis, best);
  }
  CHECK(worst_to_axis <= 2.0 * px);

  double worst_from_axis = 0.0;
  for (const auto& [a, b] : segments) {
    for (int i = 0; i <= 500; ++i) {
      const Vec2 q = a + (b - a) * (i / 500.0);
      double best = std::numeric_limits<double>::infinity();
      for (const Vec2& m : gt.medial_points) best = std::min(best, (q - m).norm());
      worst_from_axis = std::max(worst_from_axis, best);
    }
  }
  CHECK(worst_from_axis <= 2.0 * px);
}

TEST_CASE("medial pixels of a disk collapse to its center") {
  const BinaryGrid grid = rasterize(make_circle(64).boundary_loops, 1024);
  const GroundTruthAxis gt = extract_medial_pixels(grid);
  REQUIRE_FALSE(gt.medial_points.empty());
  const double px = 1.0 / grid.scale;
  for (const Vec2& m : gt.medial_points) CHECK(m.norm() <= 2.0 * px);
}

TEST_CASE("medial pixels of an annulus form a closed loop at the mid-circle") {
  const BinaryGrid grid = rasterize(make_annulus(64).boundary_loops, 1024);
  const GroundTruthAxis gt = extract_medial_pixels(grid);
  REQUIRE(gt.medial_points.size() > 100);
  const double px = 1.0 / grid.scale;
  for (const Vec2& m : gt.medial_points)
    CHECK(std::abs(m.norm() - 0.75) <= 2.0 * px);

  // Closed loop: every pixel has at least two 8-neighbors in the set and the
  // set forms one connected component.
  std::set<std::pair<long, long>> px_set;
  for (const Vec2& m : gt.medial_points) {
    const Vec2 p = grid.world_to_pixel(m);
    px_set.insert(
        {static_cast<long>(std::floor(p.x())), static_cast<long>(std::floor(p.y()))});
  }
  for (const auto& [x, y] : px_set) {
    int nb = 0;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx)
        if ((dx || dy) && px_set.count({x + dx, y + dy})) ++nb;
    CHECK(nb >= 2);
  }
  std::set<std::pair<long, long>> seen;
  std::vector<std::pair<long, long>> stack = {*px_set.begin()};
  seen.insert(stack[0]);
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (!dx && !dy) continue;
        const std::pair<long, long> n{x + dx, y + dy};
        if (px_set.count(n) && !seen.count(n)) {
          seen.insert(n);
          stack.push_back(n);
        }
      }
  }
  CHECK(seen.size() == px_set.size());
}

TEST_CASE("ground truth axis is non-empty for any grid with interior") {
  Rng rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const BinaryGrid grid = random_grid(48, rng);
    if (grid.interior_count() == 0) continue;
    CHECK_FALSE(extract_medial_pixels(grid).medial_points.empty());
  }
}

TEST_CASE("metrics basic cases") {
  GroundTruthAxis gt;
  gt.medial_points = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
  const double diag = 2.0;

  {
    const auto rep = metrics({Vec2(1, 0), Vec2(0, 1)}, gt, diag);
    CHECK(rep.e_avg_pct == 0.0);
    CHECK(rep.e_max_pct == 0.0);
  }
  {
    const auto rep = metrics({Vec2(0.02, 0)}, gt, diag);  // 1% of the diagonal
    CHECK(rep.e_avg_pct == doctest::Approx(1.0));
    CHECK(rep.e_max_pct == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(metrics({}, gt, diag), Error);
}

TEST_CASE("metrics equals a brute-force scan and e_avg <= e_max") {
  Rng rng(555);
  GroundTruthAxis gt;
  for (int i = 0; i < 200; ++i)
    gt.medial_points.push_back(Vec2(rng.uniform(-1, 1), rng.uniform(-1, 1)));
  std::vector<Vec2> atoms;
  for (int i = 0; i < 1000; ++i)
    atoms.push_back(Vec2(rng.uniform(-1, 1), rng.uniform(-1, 1)));
  const double diag = 2.83;
  const auto rep = metrics(atoms, gt, diag);
  REQUIRE(rep.distances.size() == atoms.size());
  double sum = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : gt.medial_points) best = std::min(best, (atoms[i] - m).norm());
    REQUIRE(rep.distances[i] == best);
    sum += best;
    worst = std::max(worst, best);
  }
  CHECK(rep.e_avg_pct == 100.0 * sum / atoms.size() / diag);
  CHECK(rep.e_max_pct == 100.0 * worst / diag);
  CHECK(rep.e_avg_pct <= rep.e_max_pct);
}

TEST_CASE("metrics is translation and uniform-scale invariant") {
  Rng rng(9);
  GroundTruthAxis gt, gt2;
  std::vector<Vec2> atoms, atoms2;
  const Vec2 shift(3.7, -1.2);
  const double scale = 5.3;
  for (int i = 0; i < 50; ++i) {
    const Vec2 m(rng.uniform(-1, 1), rng.uniform(-1, 1));
    gt.medial_points.push_back(m);
    gt2.medial_points.push_back(scale * m + shift);
  }
  for (int i = 0; i < 80; ++i) {
    const Vec2 a(rng.uniform(-1, 1), rng.uniform(-1, 1));
    atoms.push_back(a);
    atoms2.push_back(scale * a + shift);
  }
  const auto r1 = metrics(atoms, gt, 2.0);
  const auto r2 = metrics(atoms2, gt2, 2.0 * scale);
  CHECK(r1.e_avg_pct == doctest::Approx(r2.e_avg_pct).epsilon(1e-10));
  CHECK(r1.e_max_pct == doctest::Approx(r2.e_max_pct).epsilon(1e-10));
}

TEST_CASE("ground truth pixels against themselves score zero") {
  const BinaryGrid grid = rasterize(make_star(64).boundary_loops, 256);
  const GroundTruthAxis gt = extract_medial_pixels(grid);
  const auto rep = metrics(gt.medial_points, gt, 2.0);
  CHECK(rep.e_avg_pct == 0.0);
  CHECK(rep.e_max_pct == 0.0);
}
