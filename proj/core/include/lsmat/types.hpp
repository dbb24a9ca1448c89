#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace lsmat {

template <int D>
using Vec = Eigen::Matrix<double, D, 1>;

using Vec2 = Vec<2>;
using Vec3 = Vec<3>;

/// Sphere parameters of one medial candidate, (d+1) degrees of freedom.
template <int D>
struct Sphere {
  Vec<D> center = Vec<D>::Zero();
  double radius = 0.0;

  bool is_valid() const { return radius >= 0.0 && center.allFinite(); }
};

using Sphere2 = Sphere<2>;
using Sphere3 = Sphere<3>;

// Gradient layout used throughout: [d/dc, d/dr].
template <int D>
using SphereGrad = Eigen::Matrix<double, D + 1, 1>;

template <int D>
using SphereMat = Eigen::Matrix<double, D + 1, D + 1>;

}  // namespace lsmat
