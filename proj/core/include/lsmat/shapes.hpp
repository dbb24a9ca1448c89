#pragma once

#include <string>
#include <vector>

#include "lsmat/cloud.hpp"
#include "lsmat/types.hpp"

namespace lsmat {

using Loop = std::vector<Vec2>;

/// A 2D fixture: boundary samples with outward normals plus the exact
/// boundary polygon(s) used as ground truth.
struct Shape2D {
  std::vector<Vec2> points;
  std::vector<Vec2> normals;
  std::vector<Loop> boundary_loops;
};

struct Shape3D {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;
};

// 2D generators; n is the sample count, normals point out of the solid.
Shape2D make_circle(int n, double radius = 1.0);
Shape2D make_ellipse(int n, double a = 1.0, double b = 0.55);
Shape2D make_rectangle(int n, double width = 2.0, double height = 1.0);
Shape2D make_annulus(int n, double r_outer = 1.0, double r_inner = 0.5);
Shape2D make_star(int n, int spikes = 5, double r_outer = 1.0, double r_inner = 0.45);
/// Rectangle with a V-notch cut into the top edge.
Shape2D make_notched_box(int n, double width = 2.0, double height = 1.0,
                         double notch_depth = 0.6, double notch_width = 0.35);

// 3D generators.
Shape3D make_sphere3(int n, double radius = 1.0);
Shape3D make_torus(int n, double major = 1.0, double minor = 0.35);
Shape3D make_box3(int n, double w = 2.0, double h = 1.0, double d = 1.0);

Shape2D make_shape2d(const std::string& name, int n);
Shape3D make_shape3d(const std::string& name, int n);
bool is_known_shape2d(const std::string& name);
bool is_known_shape3d(const std::string& name);

OrientedPointCloud<2> to_cloud(const Shape2D& shape);
OrientedPointCloud<3> to_cloud(const Shape3D& shape);

/// Minimum distance from q to the sampled boundary loops.
double polyline_distance(const std::vector<Loop>& loops, const Vec2& q);

}  // namespace lsmat
