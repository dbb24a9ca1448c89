#include "lsmat/eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <utility>

#include "lsmat/error.hpp"

namespace lsmat {

// ---------------------------------------------------------------------------
// Rasterization

BinaryGrid rasterize(const std::vector<Loop>& loops, int resolution) {
  if (resolution < 2) throw Error("rasterize: resolution too small");
  if (loops.empty()) throw Error("rasterize: no loops");
  for (const Loop& loop : loops)
    if (loop.size() < 3) throw Error("rasterize: degenerate polygon (< 3 vertices)");

  Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity());
  Vec2 hi = Vec2::Constant(-std::numeric_limits<double>::infinity());
  for (const Loop& loop : loops)
    for (const Vec2& v : loop) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
  const Vec2 extent = hi - lo;
  const double max_extent = extent.maxCoeff();
  if (!(max_extent > 0.0)) throw Error("rasterize: degenerate polygon (zero extent)");

  BinaryGrid grid;
  grid.resolution = resolution;
  grid.scale = resolution / max_extent;
  // Center the short axis inside the square grid.
  for (int k = 0; k < 2; ++k)
    grid.origin[k] = lo[k] - 0.5 * (resolution / grid.scale - extent[k]);
  grid.occupancy.assign(static_cast<std::size_t>(resolution) * resolution, 0);

  std::vector<double> xs;
  for (int iy = 0; iy < resolution; ++iy) {
    const double yw = grid.origin.y() + (iy + 0.5) / grid.scale;
    xs.clear();
    for (const Loop& loop : loops) {
      const std::size_t m = loop.size();
      for (std::size_t e = 0; e < m; ++e) {
        const Vec2& a = loop[e];
        const Vec2& b = loop[(e + 1) % m];
        if ((a.y() <= yw) == (b.y() <= yw)) continue;
        xs.push_back(a.x() + (yw - a.y()) * (b.x() - a.x()) / (b.y() - a.y()));
      }
    }
    std::sort(xs.begin(), xs.end());
    std::uint8_t* row = grid.occupancy.data() + static_cast<std::size_t>(iy) * resolution;
    for (std::size_t c = 0; c + 1 < xs.size(); c += 2) {
      const double px0 = (xs[c] - grid.origin.x()) * grid.scale - 0.5;
      const double px1 = (xs[c + 1] - grid.origin.x()) * grid.scale - 0.5;
      int ix0 = static_cast<int>(std::ceil(px0));
      int ix1 = static_cast<int>(std::ceil(px1));  // exclusive
      ix0 = std::max(ix0, 0);
      ix1 = std::min(ix1, resolution);
      for (int ix = ix0; ix < ix1; ++ix) row[ix] = 1;
    }
  }

  if (grid.interior_count() == 0) throw Error("rasterize: polygon has no interior pixels");
  return grid;
}

// ---------------------------------------------------------------------------
// Exact Euclidean distance transform

namespace {

/// Lower envelope of parabolas (x - i)^2 + f[i] evaluated at integer x.
/// All comparisons are exact: envelope boundaries are rationals num/den with
/// den > 0, compared by cross-multiplication in 64-bit (values here stay far
/// below overflow: num <= 2*(res+1)^2, den <= 2*res).
void envelope_1d(const std::vector<std::int64_t>& f, std::vector<std::int64_t>& d,
                 std::vector<int>& v, std::vector<std::int64_t>& zn,
                 std::vector<std::int64_t>& zd) {
  const int n = static_cast<int>(f.size());
  v.assign(static_cast<std::size_t>(n), 0);
  zn.assign(static_cast<std::size_t>(n) + 1, 0);
  zd.assign(static_cast<std::size_t>(n) + 1, 0);
  auto intersect = [&f](int p, int q, std::int64_t& num, std::int64_t& den) {
    num = f[q] + static_cast<std::int64_t>(q) * q - f[p] - static_cast<std::int64_t>(p) * p;
    den = 2 * static_cast<std::int64_t>(q - p);
  };
  int k = 0;
  v[0] = 0;
  for (int q = 1; q < n; ++q) {
    std::int64_t sn = 0, sd = 1;
    for (;;) {
      intersect(v[k], q, sn, sd);
      if (k > 0 && sn * zd[k] <= zn[k] * sd) {
        --k;
        continue;
      }
      break;
    }
    ++k;
    v[k] = q;
    zn[k] = sn;
    zd[k] = sd;
  }
  d.resize(static_cast<std::size_t>(n));
  int j = 0;
  for (int x = 0; x < n; ++x) {
    // Advance while the next boundary is <= x; at an exact tie both
    // parabolas agree, so either choice yields the same value.
    while (j < k && zn[j + 1] <= static_cast<std::int64_t>(x) * zd[j + 1]) ++j;
    const std::int64_t dx = x - v[j];
    d[static_cast<std::size_t>(x)] = dx * dx + f[static_cast<std::size_t>(v[j])];
  }
}

}  // namespace

std::vector<std::int64_t> distance_transform_squared(const BinaryGrid& grid) {
  const int res = grid.resolution;
  const std::size_t total = static_cast<std::size_t>(res) * res;
  // Phase 1: per-column vertical distance to the nearest free pixel center,
  // counting the virtual free rows just outside the grid.
  std::vector<std::int64_t> g(total, 0);
  for (int ix = 0; ix < res; ++ix) {
    std::int64_t run = 0;  // distance to nearest free at or below (virtual at -1)
    for (int iy = 0; iy < res; ++iy) {
      run = grid.occupied(ix, iy) ? run + 1 : 0;
      g[static_cast<std::size_t>(iy) * res + ix] = run;
    }
    run = 0;
    for (int iy = res - 1; iy >= 0; --iy) {
      run = grid.occupied(ix, iy) ? run + 1 : 0;
      auto& cell = g[static_cast<std::size_t>(iy) * res + ix];
      cell = std::min(cell, run);
    }
  }
  // Phase 2: row-wise parabola envelope over squared column distances, plus
  // the virtual free columns just outside the grid.
  std::vector<std::int64_t> out(total, 0);
  std::vector<std::int64_t> f(static_cast<std::size_t>(res));
  std::vector<std::int64_t> d;
  std::vector<int> v;
  std::vector<std::int64_t> zn, zd;
  for (int iy = 0; iy < res; ++iy) {
    for (int ix = 0; ix < res; ++ix) {
      const std::int64_t gv = g[static_cast<std::size_t>(iy) * res + ix];
      f[static_cast<std::size_t>(ix)] = gv * gv;
    }
    envelope_1d(f, d, v, zn, zd);
    for (int ix = 0; ix < res; ++ix) {
      std::int64_t best = d[static_cast<std::size_t>(ix)];
      const std::int64_t left = static_cast<std::int64_t>(ix) + 1;
      const std::int64_t right = static_cast<std::int64_t>(res - ix);
      best = std::min(best, left * left);
      best = std::min(best, right * right);
      out[static_cast<std::size_t>(iy) * res + ix] =
          grid.occupied(ix, iy) ? best : 0;
    }
  }
  return out;
}

std::vector<double> distance_transform(const BinaryGrid& grid) {
  const std::vector<std::int64_t> sq = distance_transform_squared(grid);
  std::vector<double> out(sq.size());
  for (std::size_t i = 0; i < sq.size(); ++i)
    out[i] = std::sqrt(static_cast<double>(sq[i]));
  return out;
}

// ---------------------------------------------------------------------------
// Skeleton extraction

namespace {

/// (8, 4) simple-point lookup table over the 8-neighborhood bit mask.
/// Bit order: (dx, dy) in row-major around the center.
class SimpleLut {
 public:
  SimpleLut() {
    constexpr int offs[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0},
                                {1, 0},   {-1, 1}, {0, 1},  {1, 1}};
    for (int mask = 0; mask < 256; ++mask) {
      bool fg[3][3] = {};
      for (int b = 0; b < 8; ++b)
        if (mask & (1 << b)) fg[offs[b][0] + 1][offs[b][1] + 1] = true;
      table_[mask] = fg_components(fg) == 1 && bg_components(fg) == 1;
    }
  }
  bool operator[](int mask) const { return table_[static_cast<std::size_t>(mask)]; }

 private:
  // 8-connected components of ring foreground (all are adjacent to center).
  static int fg_components(const bool fg[3][3]) {
    bool seen[3][3] = {};
    int comps = 0;
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 3; ++y) {
        if ((x == 1 && y == 1) || !fg[x][y] || seen[x][y]) continue;
        ++comps;
        std::array<std::pair<int, int>, 9> stack;
        int top = 0;
        stack[top++] = {x, y};
        seen[x][y] = true;
        while (top > 0) {
          auto [cx, cy] = stack[--top];
          for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy) {
              const int nx = cx + dx, ny = cy + dy;
              if (nx < 0 || ny < 0 || nx > 2 || ny > 2) continue;
              if (nx == 1 && ny == 1) continue;
              if (!fg[nx][ny] || seen[nx][ny]) continue;
              seen[nx][ny] = true;
              stack[top++] = {nx, ny};
            }
        }
      }
    return comps;
  }

  // 4-connected background components that touch the center 4-adjacently.
  static int bg_components(const bool fg[3][3]) {
    bool seen[3][3] = {};
    int comps = 0;
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 3; ++y) {
        if ((x == 1 && y == 1) || fg[x][y] || seen[x][y]) continue;
        // Flood this bg component, noting 4-adjacency to the center.
        bool touches_center = false;
        std::array<std::pair<int, int>, 9> stack;
        int top = 0;
        stack[top++] = {x, y};
        seen[x][y] = true;
        while (top > 0) {
          auto [cx, cy] = stack[--top];
          if ((cx == 1) != (cy == 1)) touches_center = true;  // (1,0),(0,1),(2,1),(1,2)
          constexpr int d4[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
          for (const auto& d : d4) {
            const int nx = cx + d[0], ny = cy + d[1];
            if (nx < 0 || ny < 0 || nx > 2 || ny > 2) continue;
            if (nx == 1 && ny == 1) continue;
            if (fg[nx][ny] || seen[nx][ny]) continue;
            seen[nx][ny] = true;
            stack[top++] = {nx, ny};
          }
        }
        if (touches_center) ++comps;
      }
    return comps;
  }

  std::array<bool, 256> table_;
};

const SimpleLut& simple_lut() {
  static const SimpleLut lut;
  return lut;
}

struct SkeletonScratch {
  int res = 0;
  std::vector<std::uint8_t> fg;

  bool at(int x, int y) const {
    return x >= 0 && y >= 0 && x < res && y < res &&
           fg[static_cast<std::size_t>(y) * res + x] != 0;
  }
  int neighbor_mask(int x, int y) const {
    constexpr int offs[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0},
                                {1, 0},   {-1, 1}, {0, 1},  {1, 1}};
    int mask = 0;
    for (int b = 0; b < 8; ++b)
      if (at(x + offs[b][0], y + offs[b][1])) mask |= 1 << b;
    return mask;
  }
  int degree(int x, int y) const {
    int mask = neighbor_mask(x, y);
    int n = 0;
    while (mask) {
      mask &= mask - 1;
      ++n;
    }
    return n;
  }
};

// Ridge anchors: a pixel is an anchor unless some nearby pixel's disc covers
// its own (with a slack absorbing rasterization noise). Checked over all
// offsets within a Chebyshev radius of 3.
constexpr double kAnchorSlack = 0.35;
// A branch pixel is prunable when the disc at the branch target covers its
// disc within this slack (pixels). Slope-1 erosion spurs satisfy it along
// their whole length; a 45-degree true branch fails it within ~14 px of the
// tip, which protects the branch because pruning works tip-first.
constexpr double kSpurSlack = 4.0;

// Anchor components whose deepest pixel stays below this are rasterization
// staircase artifacts (their scale never exceeds a couple of pixels, at any
// resolution); genuine ridges connect to deep pixels.
constexpr double kAnchorComponentFloor = 3.0;

std::vector<std::uint8_t> compute_anchors(const BinaryGrid& grid,
                                          const std::vector<std::int64_t>& sq) {
  const int res = grid.resolution;
  std::vector<std::uint8_t> anchor(sq.size(), 0);
  for (int y = 0; y < res; ++y) {
    for (int x = 0; x < res; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * res + x;
      if (!grid.occupied(x, y)) continue;
      const double dp = std::sqrt(static_cast<double>(sq[i]));
      bool covered = false;
      for (int dy = -3; dy <= 3 && !covered; ++dy) {
        for (int dx = -3; dx <= 3 && !covered; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const int qx = x + dx, qy = y + dy;
          if (!grid.occupied(qx, qy)) continue;
          const double dq =
              std::sqrt(static_cast<double>(sq[static_cast<std::size_t>(qy) * res + qx]));
          const double step = std::sqrt(static_cast<double>(dx * dx + dy * dy));
          if (dq >= dp + step - kAnchorSlack) covered = true;
        }
      }
      if (!covered) anchor[i] = 1;
    }
  }

  // Drop shallow isolated anchor components (8-connected flood fill).
  std::vector<std::uint8_t> seen(anchor.size(), 0);
  std::vector<std::size_t> stack, component;
  for (std::size_t start = 0; start < anchor.size(); ++start) {
    if (!anchor[start] || seen[start]) continue;
    stack.assign(1, start);
    component.clear();
    seen[start] = 1;
    std::int64_t deepest = 0;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      component.push_back(i);
      deepest = std::max(deepest, sq[i]);
      const int x = static_cast<int>(i % static_cast<std::size_t>(res));
      const int y = static_cast<int>(i / static_cast<std::size_t>(res));
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= res || ny >= res) continue;
          const std::size_t ni = static_cast<std::size_t>(ny) * res + nx;
          if (!anchor[ni] || seen[ni]) continue;
          seen[ni] = 1;
          stack.push_back(ni);
        }
    }
    if (static_cast<double>(deepest) < kAnchorComponentFloor * kAnchorComponentFloor)
      for (const std::size_t i : component) anchor[i] = 0;
  }
  return anchor;
}

/// Ordered thinning to a fixpoint. keep(i) pixels are immune; simple points
/// are removed in ascending distance order. A removal re-queues the
/// neighbors, so retraction chains complete no matter where the scan is.
template <typename KeepFn>
void thin(SkeletonScratch& s, const std::vector<std::int64_t>& sq, KeepFn&& keep) {
  const int res = s.res;
  using Entry = std::pair<std::int64_t, std::size_t>;  // (squared DT, index)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
  for (std::size_t i = 0; i < s.fg.size(); ++i)
    if (s.fg[i]) queue.push({sq[i], i});
  const SimpleLut& lut = simple_lut();
  while (!queue.empty()) {
    const std::size_t i = queue.top().second;
    queue.pop();
    if (!s.fg[i] || keep(i)) continue;
    const int x = static_cast<int>(i % static_cast<std::size_t>(res));
    const int y = static_cast<int>(i / static_cast<std::size_t>(res));
    if (!lut[s.neighbor_mask(x, y)]) continue;
    s.fg[i] = 0;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const int nx = x + dx, ny = y + dy;
        if (!s.at(nx, ny)) continue;
        const std::size_t ni = static_cast<std::size_t>(ny) * res + nx;
        queue.push({sq[ni], ni});
      }
  }
}

/// Prunes insignificant endpoint branches. From each tip the chain is walked
/// until a junction (degree >= 3) or the far endpoint; the branch target is
/// that junction, or the maximum-distance pixel of a bare chain. The maximal
/// prefix of pixels whose discs the target's disc covers (within kSpurSlack)
/// is removed. Iterates until stable.
void prune_spurs(SkeletonScratch& s, const std::vector<std::int64_t>& sq) {
  const int res = s.res;
  auto dist_at = [&](int x, int y) {
    return std::sqrt(static_cast<double>(sq[static_cast<std::size_t>(y) * res + x]));
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (int y = 0; y < res; ++y) {
      for (int x = 0; x < res; ++x) {
        if (!s.at(x, y) || s.degree(x, y) != 1) continue;
        // Walk the chain hanging off this tip.
        std::vector<std::pair<int, int>> path = {{x, y}};
        int px = -1, py = -1, cx = x, cy = y;
        int junction_x = -1, junction_y = -1;
        for (;;) {
          int nx = -1, ny = -1;
          for (int dy2 = -1; dy2 <= 1 && nx < 0; ++dy2)
            for (int dx2 = -1; dx2 <= 1; ++dx2) {
              if (dx2 == 0 && dy2 == 0) continue;
              const int tx = cx + dx2, ty = cy + dy2;
              if (!s.at(tx, ty) || (tx == px && ty == py)) continue;
              nx = tx;
              ny = ty;
              break;
            }
          if (nx < 0) break;  // far endpoint reached
          px = cx;
          py = cy;
          cx = nx;
          cy = ny;
          if (s.degree(cx, cy) >= 3) {
            junction_x = cx;
            junction_y = cy;
            break;
          }
          path.push_back({cx, cy});
          if (path.size() > static_cast<std::size_t>(8 * res)) break;
        }
        int tx = junction_x, ty = junction_y;
        if (tx < 0) {
          // Bare chain: measure against its deepest pixel.
          double best = -1.0;
          for (const auto& [bx, by] : path) {
            const double d = dist_at(bx, by);
            if (d > best) {
              best = d;
              tx = bx;
              ty = by;
            }
          }
        }
        const double target_d = dist_at(tx, ty);
        std::size_t removed = 0;
        for (const auto& [bx, by] : path) {
          if (bx == tx && by == ty) break;
          const double span = std::hypot(static_cast<double>(bx - tx),
                                         static_cast<double>(by - ty));
          if (target_d >= dist_at(bx, by) + span - kSpurSlack) {
            s.fg[static_cast<std::size_t>(by) * res + bx] = 0;
            ++removed;
          } else {
            break;
          }
        }
        if (removed > 0) changed = true;
      }
    }
  }
}

}  // namespace

GroundTruthAxis extract_medial_pixels(const BinaryGrid& grid) {
  if (grid.interior_count() == 0) throw Error("extract_medial_pixels: empty grid");
  const std::vector<std::int64_t> sq = distance_transform_squared(grid);
  const std::vector<std::uint8_t> anchor = compute_anchors(grid, sq);

  SkeletonScratch s;
  s.res = grid.resolution;
  s.fg = grid.occupancy;

  // Iterated to a fixpoint: pruning exposes strands whose pixels were not
  // simple while the strand was attached, and the next round removes them.
  long count = grid.interior_count();
  for (;;) {
    // Erode everything non-essential; anchors are immune, so ridges and the
    // paths connecting them survive.
    thin(s, sq, [&anchor](std::size_t i) { return anchor[i] != 0; });
    // Reduce residual two-pixel plateaus; endpoints are immune so branch
    // tips do not retract.
    thin(s, sq, [&s](std::size_t i) {
      const int x = static_cast<int>(i % static_cast<std::size_t>(s.res));
      const int y = static_cast<int>(i / static_cast<std::size_t>(s.res));
      return s.degree(x, y) <= 1;
    });
    // Drop insignificant spurs.
    prune_spurs(s, sq);
    long now = 0;
    for (auto v : s.fg) now += v;
    if (now >= count) break;
    count = now;
  }

  GroundTruthAxis gt;
  gt.resolution = grid.resolution;
  for (int y = 0; y < s.res; ++y)
    for (int x = 0; x < s.res; ++x)
      if (s.at(x, y)) gt.medial_points.push_back(grid.pixel_center_world(x, y));
  return gt;
}

EvalReport metrics(const std::vector<Vec2>& centers, const GroundTruthAxis& gt,
                   double diag) {
  if (centers.empty()) throw Error("metrics: no atoms");
  if (gt.medial_points.empty()) throw Error("metrics: empty ground truth");
  if (!(diag > 0.0)) throw Error("metrics: diag must be > 0");
  EvalReport report;
  report.distances.reserve(centers.size());
  double sum = 0.0, worst = 0.0;
  for (const Vec2& c : centers) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec2& m : gt.medial_points) best = std::min(best, (c - m).norm());
    report.distances.push_back(best);
    sum += best;
    worst = std::max(worst, best);
  }
  report.e_avg_pct = 100.0 * (sum / static_cast<double>(centers.size())) / diag;
  report.e_max_pct = 100.0 * worst / diag;
  return report;
}

}  // namespace lsmat
