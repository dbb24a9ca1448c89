#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "lsmat/cloud.hpp"
#include "lsmat/error.hpp"
#include "lsmat/parallel.hpp"
#include "lsmat/solver.hpp"
#include "lsmat/types.hpp"

namespace lsmat {

/// Sphere tangent to the oriented point (p, n) and passing through f.
/// Requires f strictly on the inner side: n.(p - f) > 1e-12. f coincident
/// with p yields the zero-radius sphere at p.
template <int D>
Sphere<D> tangent_sphere(const Vec<D>& p, const Vec<D>& n, const Vec<D>& f) {
  const Vec<D> pf = p - f;
  if (pf.norm() <= 1e-300) return Sphere<D>{p, 0.0};
  const double denom = n.dot(pf);
  if (denom <= 1e-12)
    throw DegenerateTangencyError("tangent_sphere: target lies in the tangent plane");
  Sphere<D> s;
  s.radius = pf.squaredNorm() / (2.0 * denom);
  s.center = p - s.radius * n;
  return s;
}

/// Iterative shrinking of an initially large sphere tangent at the pin.
/// Each pass replaces the sphere by the one tangent at the pin and through
/// the nearest interior violator; the radius sequence is non-increasing.
/// iterations_run counts tangency updates.
template <int D>
MedialAtom<D> shrink_sphere(int pin_index, const OrientedPointCloud<D>& cloud,
                            double r_init = -1.0) {
  const double diag = cloud.diag();
  if (r_init <= 0.0) r_init = 2.0 * diag;
  const Vec<D>& p = cloud.point(pin_index);
  const Vec<D>& n = cloud.normal(pin_index);
  const double stop_tol = 1e-9 * diag;
  const double dup_tol = 1e-12 * diag;
  const long cap = 10L * cloud.size();

  MedialAtom<D> atom;
  atom.pin_index = pin_index;
  Sphere<D> s{p - r_init * n, r_init};

  // Coincident duplicates of the pin are treated as the pin itself.
  auto skip = [&](int i) {
    return i == pin_index || (cloud.point(i) - p).norm() <= dup_tol;
  };

  long updates = 0;
  for (;;) {
    double d2 = 0.0;
    const int f_idx = cloud.index().nearest_if(s.center, skip, &d2);
    if (f_idx < 0) {  // nothing but the pin in the cloud
      atom.converged = true;
      break;
    }
    const double dist = std::sqrt(d2);
    if (dist >= s.radius - stop_tol) {
      atom.converged = true;
      break;
    }
    Sphere<D> next;
    try {
      next = tangent_sphere(p, n, cloud.point(f_idx));
    } catch (const DegenerateTangencyError&) {
      atom.solver_error = true;
      break;
    }
    atom.final_step_norm = std::abs(next.radius - s.radius);
    s = next;
    ++updates;
    if (atom.final_step_norm < stop_tol) {
      atom.converged = true;
      break;
    }
    if (updates >= cap)
      throw NonConvergenceError("shrink_sphere: iteration cap reached at pin " +
                                std::to_string(pin_index));
  }
  atom.sphere = s;
  atom.iterations_run = static_cast<int>(updates);
  if (atom.converged && updates == 0) atom.final_step_norm = 0.0;
  return atom;
}

/// Sphere-shrinking over all points; per-pin independent, order-stable.
template <int D>
MedialResult<D> shrink_all(const OrientedPointCloud<D>& cloud, int n_threads = 0,
                           double r_init = -1.0) {
  MedialResult<D> result;
  result.cloud_checksum = cloud.checksum();
  result.atoms.resize(static_cast<std::size_t>(cloud.size()));
  const int workers = default_thread_count(n_threads);
  parallel_for(cloud.size(), workers, [&](int i, int) {
    try {
      result.atoms[static_cast<std::size_t>(i)] = shrink_sphere(i, cloud, r_init);
    } catch (const NonConvergenceError&) {
      result.atoms[static_cast<std::size_t>(i)].pin_index = i;
      result.atoms[static_cast<std::size_t>(i)].solver_error = true;
    }
  });
  return result;
}

}  // namespace lsmat
