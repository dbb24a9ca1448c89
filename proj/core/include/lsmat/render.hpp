#pragma once

#include <string>
#include <vector>

#include "lsmat/cloud.hpp"
#include "lsmat/types.hpp"

namespace lsmat {

/// Viewport mapping world coordinates onto the SVG canvas (y flipped).
struct SvgViewport {
  double canvas = 900.0;
  double margin = 40.0;
  double scale = 1.0;   // pixels per world unit
  Vec2 offset = Vec2::Zero();  // pixel offset of world bbox_min, x axis

  static SvgViewport fit(const Vec2& bbox_min, const Vec2& bbox_max, double canvas = 900.0,
                         double margin = 40.0);
  double px_x(double wx) const { return offset.x() + scale * wx; }
  double px_y(double wy) const { return canvas - (offset.y() + scale * wy); }
  double px_len(double w) const { return scale * w; }
};

/// Layered 2D figure: oriented splats, translucent union of discs, center
/// dots. Sphere list may be empty (points-only figure).
void write_svg(const OrientedPointCloud<2>& cloud, const std::vector<Sphere<2>>& spheres,
               const std::string& path, const SvgViewport* viewport = nullptr);

/// ASCII PLY with one vertex per sphere center and a scalar `radius`
/// property.
void write_sphere_ply(const std::vector<Vec3>& centers, const std::vector<double>& radii,
                      const std::string& path);

}  // namespace lsmat
