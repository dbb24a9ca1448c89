#include "lsmat/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lsmat/error.hpp"

namespace lsmat {

namespace {

/// Samples a closed polygon at perimeter-uniform arc positions, offset by
/// half a step so samples never land on vertices. Vertices must wind CCW;
/// the outward normal of edge a->b is then (dy, -dx)/len.
Shape2D sample_polygon(const Loop& vertices, int n) {
  const std::size_t m = vertices.size();
  std::vector<double> cumulative(m + 1, 0.0);
  for (std::size_t e = 0; e < m; ++e)
    cumulative[e + 1] = cumulative[e] + (vertices[(e + 1) % m] - vertices[e]).norm();
  const double perimeter = cumulative[m];

  Shape2D shape;
  shape.points.reserve(n);
  shape.normals.reserve(n);
  std::size_t edge = 0;
  for (int i = 0; i < n; ++i) {
    const double arc = (i + 0.5) * perimeter / n;
    while (edge + 1 < m && cumulative[edge + 1] < arc) ++edge;
    const Vec2& a = vertices[edge];
    const Vec2& b = vertices[(edge + 1) % m];
    const Vec2 d = b - a;
    const double len = d.norm();
    const double t = (arc - cumulative[edge]) / len;
    shape.points.push_back(a + t * d);
    shape.normals.push_back(Vec2(d.y(), -d.x()) / len);
  }
  shape.boundary_loops.push_back(vertices);
  return shape;
}

Loop circle_loop(double radius, int segments, bool ccw = true) {
  Loop loop;
  loop.reserve(segments);
  for (int i = 0; i < segments; ++i) {
    const double t = 2.0 * M_PI * i / segments * (ccw ? 1.0 : -1.0);
    loop.push_back(Vec2(radius * std::cos(t), radius * std::sin(t)));
  }
  return loop;
}

constexpr int kLoopSegments = 2048;

}  // namespace

Shape2D make_circle(int n, double radius) {
  Shape2D shape;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * M_PI * i / n;
    const Vec2 dir(std::cos(t), std::sin(t));
    shape.points.push_back(radius * dir);
    shape.normals.push_back(dir);
  }
  shape.boundary_loops.push_back(circle_loop(radius, kLoopSegments));
  return shape;
}

Shape2D make_ellipse(int n, double a, double b) {
  Shape2D shape;
  Loop loop;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * M_PI * i / n;
    shape.points.push_back(Vec2(a * std::cos(t), b * std::sin(t)));
    // Outward normal of the implicit level set (x/a)^2 + (y/b)^2.
    Vec2 normal(std::cos(t) / a, std::sin(t) / b);
    shape.normals.push_back(normal.normalized());
  }
  for (int i = 0; i < kLoopSegments; ++i) {
    const double t = 2.0 * M_PI * i / kLoopSegments;
    loop.push_back(Vec2(a * std::cos(t), b * std::sin(t)));
  }
  shape.boundary_loops.push_back(loop);
  return shape;
}

Shape2D make_rectangle(int n, double width, double height) {
  const double hw = width / 2.0, hh = height / 2.0;
  const Loop corners = {Vec2(-hw, -hh), Vec2(hw, -hh), Vec2(hw, hh), Vec2(-hw, hh)};
  return sample_polygon(corners, n);
}

Shape2D make_annulus(int n, double r_outer, double r_inner) {
  if (!(r_outer > r_inner && r_inner > 0.0)) throw Error("annulus: need r_outer > r_inner > 0");
  Shape2D shape;
  // Split samples by perimeter share.
  const int n_outer = static_cast<int>(std::lround(n * r_outer / (r_outer + r_inner)));
  const int n_inner = n - n_outer;
  for (int i = 0; i < n_outer; ++i) {
    const double t = 2.0 * M_PI * i / n_outer;
    const Vec2 dir(std::cos(t), std::sin(t));
    shape.points.push_back(r_outer * dir);
    shape.normals.push_back(dir);
  }
  for (int i = 0; i < n_inner; ++i) {
    const double t = 2.0 * M_PI * i / n_inner;
    const Vec2 dir(std::cos(t), std::sin(t));
    shape.points.push_back(r_inner * dir);
    shape.normals.push_back(-dir);  // out of the solid ring, into the hole
  }
  shape.boundary_loops.push_back(circle_loop(r_outer, kLoopSegments));
  shape.boundary_loops.push_back(circle_loop(r_inner, kLoopSegments));
  return shape;
}

Shape2D make_star(int n, int spikes, double r_outer, double r_inner) {
  if (spikes < 3) throw Error("star: need at least 3 spikes");
  Loop vertices;
  for (int i = 0; i < spikes; ++i) {
    const double t0 = 2.0 * M_PI * i / spikes + M_PI / 2.0;
    const double t1 = t0 + M_PI / spikes;
    vertices.push_back(Vec2(r_outer * std::cos(t0), r_outer * std::sin(t0)));
    vertices.push_back(Vec2(r_inner * std::cos(t1), r_inner * std::sin(t1)));
  }
  return sample_polygon(vertices, n);
}

Shape2D make_notched_box(int n, double width, double height, double notch_depth,
                         double notch_width) {
  if (!(notch_depth < height) || !(notch_width < width))
    throw Error("notched_box: notch must fit inside the box");
  const double hw = width / 2.0, hh = height / 2.0, nw = notch_width / 2.0;
  const Loop vertices = {
      Vec2(-hw, -hh), Vec2(hw, -hh), Vec2(hw, hh),
      Vec2(nw, hh),   Vec2(0.0, hh - notch_depth), Vec2(-nw, hh),
      Vec2(-hw, hh),
  };
  return sample_polygon(vertices, n);
}

Shape3D make_sphere3(int n, double radius) {
  Shape3D shape;
  // Fibonacci lattice.
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * M_PI * i / golden;
    const Vec3 dir(rho * std::cos(phi), rho * std::sin(phi), z);
    shape.points.push_back(radius * dir);
    shape.normals.push_back(dir);
  }
  return shape;
}

Shape3D make_torus(int n, double major, double minor) {
  if (!(major > minor && minor > 0.0)) throw Error("torus: need major > minor > 0");
  Shape3D shape;
  // Near-uniform parametric grid: ring count balances the two arc lengths.
  const int n_u = std::max(8, static_cast<int>(std::lround(std::sqrt(n * major / minor))));
  const int n_v = std::max(4, (n + n_u - 1) / n_u);
  for (int iu = 0; iu < n_u && static_cast<int>(shape.points.size()) < n; ++iu) {
    const double u = 2.0 * M_PI * iu / n_u;
    for (int iv = 0; iv < n_v && static_cast<int>(shape.points.size()) < n; ++iv) {
      const double v = 2.0 * M_PI * (iv + 0.5 * (iu % 2)) / n_v;
      const Vec3 ring_dir(std::cos(u), std::sin(u), 0.0);
      const Vec3 normal = std::cos(v) * ring_dir + std::sin(v) * Vec3::UnitZ();
      shape.points.push_back(major * ring_dir + minor * normal);
      shape.normals.push_back(normal);
    }
  }
  return shape;
}

Shape3D make_box3(int n, double w, double h, double d) {
  Shape3D shape;
  const Vec3 half(w / 2.0, h / 2.0, d / 2.0);
  const double areas[3] = {h * d, w * d, w * h};
  const double total = 2.0 * (areas[0] + areas[1] + areas[2]);
  for (int axis = 0; axis < 3; ++axis) {
    for (int side = -1; side <= 1; side += 2) {
      const int face_n = std::max(1, static_cast<int>(std::lround(n * areas[axis] / total)));
      const int nu = std::max(1, static_cast<int>(std::lround(std::sqrt(face_n))));
      const int nv = std::max(1, (face_n + nu - 1) / nu);
      const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
      for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nv; ++j) {
          Vec3 p = Vec3::Zero();
          p[axis] = side * half[axis];
          p[a1] = (-1.0 + (2.0 * i + 1.0) / nu) * half[a1];
          p[a2] = (-1.0 + (2.0 * j + 1.0) / nv) * half[a2];
          Vec3 normal = Vec3::Zero();
          normal[axis] = side;
          shape.points.push_back(p);
          shape.normals.push_back(normal);
        }
      }
    }
  }
  return shape;
}

Shape2D make_shape2d(const std::string& name, int n) {
  if (name == "circle") return make_circle(n);
  if (name == "ellipse") return make_ellipse(n);
  if (name == "rectangle") return make_rectangle(n);
  if (name == "annulus") return make_annulus(n);
  if (name == "star") return make_star(n);
  if (name == "notched_box") return make_notched_box(n);
  throw Error("unknown 2D shape '" + name + "'");
}

Shape3D make_shape3d(const std::string& name, int n) {
  if (name == "sphere") return make_sphere3(n);
  if (name == "torus") return make_torus(n);
  if (name == "box") return make_box3(n);
  throw Error("unknown 3D shape '" + name + "'");
}

bool is_known_shape2d(const std::string& name) {
  return name == "circle" || name == "ellipse" || name == "rectangle" ||
         name == "annulus" || name == "star" || name == "notched_box";
}

bool is_known_shape3d(const std::string& name) {
  return name == "sphere" || name == "torus" || name == "box";
}

OrientedPointCloud<2> to_cloud(const Shape2D& shape) {
  return OrientedPointCloud<2>(shape.points, shape.normals);
}

OrientedPointCloud<3> to_cloud(const Shape3D& shape) {
  return OrientedPointCloud<3>(shape.points, shape.normals);
}

double polyline_distance(const std::vector<Loop>& loops, const Vec2& q) {
  double best = std::numeric_limits<double>::infinity();
  for (const Loop& loop : loops) {
    const std::size_t m = loop.size();
    for (std::size_t e = 0; e < m; ++e) {
      const Vec2& a = loop[e];
      const Vec2& b = loop[(e + 1) % m];
      const Vec2 d = b - a;
      const double len2 = d.squaredNorm();
      double t = len2 > 0.0 ? (q - a).dot(d) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      best = std::min(best, (q - (a + t * d)).norm());
    }
  }
  return best;
}

}  // namespace lsmat
