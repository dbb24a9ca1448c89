#include "lsmat/render.hpp"

#include <cstdio>
#include <fstream>

#include "lsmat/error.hpp"

namespace lsmat {

SvgViewport SvgViewport::fit(const Vec2& bbox_min, const Vec2& bbox_max, double canvas,
                             double margin) {
  SvgViewport vp;
  vp.canvas = canvas;
  vp.margin = margin;
  const Vec2 extent = bbox_max - bbox_min;
  const double drawable = canvas - 2.0 * margin;
  vp.scale = drawable / extent.maxCoeff();
  for (int k = 0; k < 2; ++k)
    vp.offset[k] = margin + 0.5 * (drawable - extent[k] * vp.scale) - vp.scale * bbox_min[k];
  return vp;
}

void write_svg(const OrientedPointCloud<2>& cloud, const std::vector<Sphere<2>>& spheres,
               const std::string& path, const SvgViewport* viewport) {
  const SvgViewport vp =
      viewport ? *viewport : SvgViewport::fit(cloud.bbox_min(), cloud.bbox_max());
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << vp.canvas
      << "\" height=\"" << vp.canvas << "\" viewBox=\"0 0 " << vp.canvas << " "
      << vp.canvas << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Union of medial discs.
  out << "<g id=\"spheres\" fill=\"#f2a0a0\" fill-opacity=\"0.55\" stroke=\"none\">\n";
  for (const auto& s : spheres) {
    std::snprintf(buf, sizeof(buf), "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\"/>\n",
                  vp.px_x(s.center.x()), vp.px_y(s.center.y()), vp.px_len(s.radius));
    out << buf;
  }
  out << "</g>\n";

  // Oriented splats: tangent stroke plus a short normal whisker.
  const double splat = 0.008 * cloud.diag();
  out << "<g id=\"points\" stroke=\"#444444\" stroke-width=\"1\">\n";
  for (int i = 0; i < cloud.size(); ++i) {
    const Vec2& p = cloud.point(i);
    const Vec2& n = cloud.normal(i);
    const Vec2 t(-n.y(), n.x());
    const Vec2 a = p - splat * t, b = p + splat * t, c = p + 0.7 * splat * n;
    std::snprintf(buf, sizeof(buf),
                  "<path d=\"M %.2f %.2f L %.2f %.2f M %.2f %.2f L %.2f %.2f\"/>\n",
                  vp.px_x(a.x()), vp.px_y(a.y()), vp.px_x(b.x()), vp.px_y(b.y()),
                  vp.px_x(p.x()), vp.px_y(p.y()), vp.px_x(c.x()), vp.px_y(c.y()));
    out << buf;
  }
  out << "</g>\n";

  // Medial centers.
  out << "<g id=\"centers\" fill=\"#8b0000\">\n";
  for (const auto& s : spheres) {
    std::snprintf(buf, sizeof(buf), "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"1.6\"/>\n",
                  vp.px_x(s.center.x()), vp.px_y(s.center.y()));
    out << buf;
  }
  out << "</g>\n</svg>\n";
  if (!out) throw Error("write failed for '" + path + "'");
}

void write_sphere_ply(const std::vector<Vec3>& centers, const std::vector<double>& radii,
                      const std::string& path) {
  if (centers.size() != radii.size()) throw Error("write_sphere_ply: size mismatch");
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << centers.size() << "\n";
  out << "property double x\nproperty double y\nproperty double z\n";
  out << "property double radius\nend_header\n";
  char buf[160];
  for (std::size_t i = 0; i < centers.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %.17g\n", centers[i].x(),
                  centers[i].y(), centers[i].z(), radii[i]);
    out << buf;
  }
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace lsmat
