#pragma once

#include <cmath>

#include "lsmat/cloud.hpp"
#include "lsmat/error.hpp"
#include "lsmat/types.hpp"

namespace lsmat {

/// Ramp R(x) = max(x, 0).
inline double ramp(double x) { return x > 0.0 ? x : 0.0; }

/// Heaviside step, zero at the kink: H(x) = 1 for x > 0, else 0.
inline double heaviside(double x) { return x > 0.0 ? 1.0 : 0.0; }

/// Compactly supported radial kernel (1 - (x/h)^2)^4 on [0, h).
/// C^1 at the support boundary: value and slope both vanish at x = h.
inline double kernel(double x, double h) {
  const double t = x / h;
  if (t >= 1.0) return 0.0;
  const double u = 1.0 - t * t;
  const double u2 = u * u;
  return u2 * u2;
}

inline double kernel_derivative(double x, double h) {
  const double t = x / h;
  if (t >= 1.0) return 0.0;
  const double u = 1.0 - t * t;
  return -8.0 * t * u * u * u / h;
}

/// Moving-least-squares signed distance: locally supported weighted average
/// of point-to-plane offsets. Valid only near the sampled surface; negative
/// inside. Throws EmptySupportError when no point lies within h of x.
template <int D>
double mls_sdf(const Vec<D>& x, const OrientedPointCloud<D>& cloud, double h) {
  if (!(h > 0.0)) throw Error("mls_sdf: h must be positive");
  double num = 0.0, den = 0.0;
  std::vector<int> idx;
  cloud.neighbors_within(x, h, idx);
  for (int i : idx) {
    const double w = kernel((x - cloud.point(i)).norm(), h);
    num += w * cloud.normal(i).dot(x - cloud.point(i));
    den += w;
  }
  if (den <= 0.0) throw EmptySupportError("mls_sdf: no support at query point");
  return num / den;
}

/// Penetration of the sphere past the tangent half-space at (p, n):
/// R(r - (p - c).n). Zero when the sphere is inside the half-space.
template <int D>
double phi_plane(const Sphere<D>& s, const Vec<D>& p, const Vec<D>& n) {
  return ramp(s.radius - (p - s.center).dot(n));
}

/// Penetration of the sphere past the sample point: R(r - ||p - c||).
template <int D>
double phi_point(const Sphere<D>& s, const Vec<D>& p) {
  return ramp(s.radius - (p - s.center).norm());
}

/// Plane/point mixing weight. Projects the previous center onto the sample's
/// tangent hyperplane and feeds the in-plane offset to the kernel: 1 when
/// the projection lands on p, 0 once it is h_blend away.
template <int D>
double blend_weight(const Vec<D>& c_prev, const Vec<D>& p, const Vec<D>& n, double h_blend) {
  const Vec<D> projected = c_prev - n * (c_prev - p).dot(n);
  return kernel((projected - p).norm(), h_blend);
}

/// Blended squared penetration: x*phi_plane^2 + (1-x)*phi_point^2 with the
/// mix weight evaluated at c_prev.
template <int D>
double phi_blend_sq(const Sphere<D>& s, const Vec<D>& p, const Vec<D>& n,
                    const Vec<D>& c_prev, double h_blend) {
  const double x = blend_weight(c_prev, p, n, h_blend);
  const double pl = phi_plane(s, p, n);
  const double pt = phi_point(s, p);
  return x * pl * pl + (1.0 - x) * pt * pt;
}

}  // namespace lsmat
