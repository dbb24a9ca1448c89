#pragma once

#include <cstdint>
#include <vector>

#include "lsmat/shapes.hpp"
#include "lsmat/types.hpp"

namespace lsmat {

/// Boolean occupancy raster with a uniform world-to-pixel transform.
/// Pixel (ix, iy) covers the unit cell at integer offsets; its center sits at
/// pixel coordinates (ix + 0.5, iy + 0.5).
struct BinaryGrid {
  int resolution = 0;
  std::vector<std::uint8_t> occupancy;  // row-major, iy * resolution + ix
  double scale = 1.0;                   // pixels per world unit
  Vec2 origin = Vec2::Zero();           // world point mapping to pixel (0, 0)

  bool occupied(int ix, int iy) const {
    return ix >= 0 && iy >= 0 && ix < resolution && iy < resolution &&
           occupancy[static_cast<std::size_t>(iy) * resolution + ix] != 0;
  }
  Vec2 pixel_center_world(int ix, int iy) const {
    return origin + Vec2((ix + 0.5) / scale, (iy + 0.5) / scale);
  }
  Vec2 world_to_pixel(const Vec2& p) const { return (p - origin) * scale; }
  long interior_count() const {
    long n = 0;
    for (auto v : occupancy) n += v;
    return n;
  }
};

/// Rasterizes closed loops with the even-odd rule sampled at pixel centers.
/// The loops' joint bounding box is fit to the grid with uniform scale and
/// centered on the short axis.
BinaryGrid rasterize(const std::vector<Loop>& loops, int resolution = 1024);

/// Exact Euclidean distance (in pixels) from each occupied pixel center to
/// the nearest non-occupied pixel center; everything outside the grid counts
/// as non-occupied. Non-occupied pixels hold 0.
std::vector<double> distance_transform(const BinaryGrid& grid);

/// Squared integer version of the above (exact arithmetic throughout).
std::vector<std::int64_t> distance_transform_squared(const BinaryGrid& grid);

/// Reference medial point set in world units.
struct GroundTruthAxis {
  std::vector<Vec2> medial_points;
  int resolution = 0;
};

/// One-pixel-wide homotopy-preserving skeleton: homotopic thinning in
/// ascending distance-transform order anchored at ridge pixels, followed by
/// pruning of branches whose tip disc is covered by their junction disc.
GroundTruthAxis extract_medial_pixels(const BinaryGrid& grid);

struct EvalReport {
  double e_avg_pct = 0.0;
  double e_max_pct = 0.0;
  std::vector<double> distances;  // per-atom nearest distance, world units
};

/// Mean / max distance from each center to its nearest ground-truth point,
/// expressed in percent of `diag`. Nearest neighbors by direct linear scan.
EvalReport metrics(const std::vector<Vec2>& centers, const GroundTruthAxis& gt,
                   double diag);

}  // namespace lsmat
