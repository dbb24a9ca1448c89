#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lsmat/cloud.hpp"
#include "lsmat/error.hpp"
#include "lsmat/fields.hpp"
#include "lsmat/parallel.hpp"
#include "lsmat/rng.hpp"
#include "lsmat/types.hpp"

namespace lsmat {

enum class InscriptionVariant { kBlended, kPointOnly, kPlaneOnly };
enum class MaximalityVariant { kConstantPressure, kInverseRadius, kTargetRadius };
enum class IrlsMode { kOff, kL1 };
enum class InitMode { kRandom, kDeterministic };

/// All solver tunables. Length-like fields (h_blend, h_support, d_pin,
/// epsilon, radius_floor, target_radius, irls_delta) are stored in percent of
/// the bounding-box diagonal and converted to world units once, at solve
/// entry.
struct SolverConfig {
  double omega_ratio = 0.02;  // omega1 / omega2
  double omega2 = 1.0;        // kept at 1; only the ratio is user-facing
  double pin_weight = 10.0;   // quadratic pinning penalty, relative to omega2=1

  double h_blend = 0.49;
  double h_support = 0.49;
  double d_pin = 0.0;
  double epsilon = 100.0;

  int max_iters = 40;
  double step_damping = 1e-8;  // actual damping = step_damping * trace(JtJ)
  double radius_floor = 0.0;
  // Inscribed spheres cannot outgrow the shape; the ceiling bounds runaway
  // growth of detached spheres so pinning can pull them back.
  double radius_ceiling = 100.0;

  InscriptionVariant inscription_variant = InscriptionVariant::kBlended;
  MaximalityVariant maximality_variant = MaximalityVariant::kConstantPressure;
  double target_radius = 25.0;  // used by kTargetRadius only

  IrlsMode irls = IrlsMode::kOff;
  double irls_delta = 0.01;        // reweighting floor, percent of diagonal
  double irls_eps_divisor = 20.0;  // effective epsilon under IRLS = epsilon / divisor

  InitMode init = InitMode::kRandom;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(omega_ratio > 0.0)) throw Error("omega_ratio must be > 0");
    if (omega2 < 0.0 || pin_weight < 0.0) throw Error("energy weights must be >= 0");
    if (!(h_blend > 0.0) || !(h_support > 0.0)) throw Error("kernel sizes must be > 0");
    if (!(epsilon > 0.0)) throw Error("epsilon must be > 0");
    if (d_pin < 0.0) throw Error("d_pin must be >= 0");
    if (max_iters < 1) throw Error("max_iters must be >= 1");
    if (step_damping < 0.0) throw Error("step_damping must be >= 0");
    if (radius_floor < 0.0) throw Error("radius_floor must be >= 0");
    if (!(radius_ceiling > radius_floor)) throw Error("radius_ceiling must exceed radius_floor");
    if (irls == IrlsMode::kL1 && !(irls_delta > 0.0)) throw Error("irls_delta must be > 0");
    if (irls == IrlsMode::kL1 && !(irls_eps_divisor > 0.0))
      throw Error("irls_eps_divisor must be > 0");
  }
};

/// Empirical defaults as linear functions of the expected noise level
/// sigma_p (percent of diagonal).
inline SolverConfig default_params(double sigma_p) {
  if (sigma_p < 0.0) throw Error("sigma_p must be >= 0");
  SolverConfig cfg;
  cfg.omega_ratio = 0.007 * sigma_p + 0.02;
  cfg.h_blend = 0.74 * sigma_p + 0.49;
  cfg.h_support = cfg.h_blend;
  cfg.d_pin = 0.75 * sigma_p;
  cfg.epsilon = 100.0;
  return cfg;
}

/// SolverConfig with every length converted to world units for one cloud.
struct ResolvedParams {
  double omega1 = 0.0, omega2 = 1.0, pin_weight = 10.0;
  double h_blend = 0.0, h_support = 0.0, d_pin = 0.0, epsilon = 0.0;
  double radius_floor = 0.0, radius_ceiling = 0.0, target_radius = 0.0;
  double irls_delta = 0.0;
  bool irls = false;
  double inverse_radius_clamp = 0.0;
  InscriptionVariant inscription = InscriptionVariant::kBlended;
  MaximalityVariant maximality = MaximalityVariant::kConstantPressure;
  int max_iters = 40;
  double step_damping = 0.0;
  double convergence_tol = 0.0;
  double diag = 0.0;
};

inline ResolvedParams resolve(const SolverConfig& cfg, double diag) {
  cfg.validate();
  if (!(diag > 0.0)) throw Error("diag must be > 0");
  const double unit = diag / 100.0;
  ResolvedParams rp;
  rp.omega2 = cfg.omega2;
  rp.omega1 = cfg.omega_ratio * cfg.omega2;
  if (!(rp.omega1 > 0.0)) rp.omega1 = cfg.omega_ratio;  // omega2 == 0 ablations
  rp.pin_weight = cfg.pin_weight;
  rp.h_blend = cfg.h_blend * unit;
  rp.h_support = cfg.h_support * unit;
  rp.d_pin = cfg.d_pin * unit;
  rp.irls = (cfg.irls == IrlsMode::kL1);
  rp.epsilon = (rp.irls ? cfg.epsilon / cfg.irls_eps_divisor : cfg.epsilon) * unit;
  rp.radius_floor = cfg.radius_floor * unit;
  rp.radius_ceiling = cfg.radius_ceiling * unit;
  rp.target_radius = cfg.target_radius * unit;
  rp.irls_delta = cfg.irls_delta * unit;
  rp.inverse_radius_clamp = std::max(rp.radius_floor, 1e-9 * diag);
  rp.inscription = cfg.inscription_variant;
  rp.maximality = cfg.maximality_variant;
  rp.max_iters = cfg.max_iters;
  rp.step_damping = cfg.step_damping;
  rp.convergence_tol = 1e-6 * diag;
  rp.diag = diag;
  return rp;
}

/// One weighted residual and its gradient wrt (c, r).
template <int D>
struct ResidualRow {
  double value = 0.0;
  SphereGrad<D> grad = SphereGrad<D>::Zero();
};

/// Constant-pressure growth residual r - (r_prev + eps); gradient [0_d, 1].
template <int D>
ResidualRow<D> maximality_residual(double r, double r_prev, double eps_world) {
  ResidualRow<D> row;
  row.value = r - (r_prev + eps_world);
  row.grad[D] = 1.0;
  return row;
}

/// 1/r growth residual variant; r is clamped below r_clamp to stay finite.
template <int D>
ResidualRow<D> inverse_radius_residual(double r, double r_clamp) {
  ResidualRow<D> row;
  const double rc = std::max(r, r_clamp);
  row.value = 1.0 / rc;
  row.grad[D] = -1.0 / (rc * rc);
  return row;
}

/// ||r - R_max|| growth residual variant; gradient [0_d, 1].
template <int D>
ResidualRow<D> target_radius_residual(double r, double r_max_world) {
  ResidualRow<D> row;
  row.value = r - r_max_world;
  row.grad[D] = 1.0;
  return row;
}

/// Contact barrier R(||c - p_pin|| - (r + d_pin)); gradient
/// H(.) * [(c - p_pin)/||c - p_pin||, -1], zero whenever inactive.
template <int D>
ResidualRow<D> pinning_residual(const Sphere<D>& s, const Vec<D>& p_pin, double d_pin_world) {
  ResidualRow<D> row;
  const Vec<D> offset = s.center - p_pin;
  const double dist = offset.norm();
  const double arg = dist - (s.radius + d_pin_world);
  row.value = ramp(arg);
  if (arg > 0.0) {
    row.grad.template head<D>() = offset / dist;
    row.grad[D] = -1.0;
  }
  return row;
}

/// Support weight of point p for the sphere's previous geometry:
/// kernel(R(||c_prev - p|| - r_prev), h_support). 1 inside the previous
/// sphere, 0 beyond r_prev + h_support.
template <int D>
double inscription_support_weight(const Sphere<D>& s_prev, const Vec<D>& p,
                                  double h_support_world) {
  return kernel(ramp((s_prev.center - p).norm() - s_prev.radius), h_support_world);
}

namespace detail {

template <int D>
ResidualRow<D> plane_row(const Sphere<D>& s, const Vec<D>& p, const Vec<D>& n,
                         double sqrt_coeff) {
  ResidualRow<D> row;
  const double arg = s.radius - (p - s.center).dot(n);
  if (arg > 0.0) {
    row.value = sqrt_coeff * arg;
    row.grad.template head<D>() = sqrt_coeff * n;
    row.grad[D] = sqrt_coeff;
  }
  return row;
}

template <int D>
ResidualRow<D> point_row(const Sphere<D>& s, const Vec<D>& p, double sqrt_coeff) {
  ResidualRow<D> row;
  const Vec<D> offset = p - s.center;
  const double dist = offset.norm();
  const double arg = s.radius - dist;
  if (arg > 0.0) {
    row.value = sqrt_coeff * arg;
    if (dist > 0.0) row.grad.template head<D>() = sqrt_coeff * offset / dist;
    row.grad[D] = sqrt_coeff;
  }
  return row;
}

// l1 reweighting, normalized so residuals at or below the floor keep unit
// weight: scale^2 = delta / max(|rho_prev|, delta).
inline double irls_scale(double prev_value, double delta_world) {
  return std::sqrt(delta_world / std::max(std::abs(prev_value), delta_world));
}

}  // namespace detail

/// Enumerates every weighted residual row of the per-sphere least-squares
/// problem, linearized at s with support, blend and IRLS weights frozen at
/// s_prev. Row order: maximality, then per supported point (ascending index)
/// a plane row and a point row where their coefficients are nonzero, then
/// pinning. fn receives each ResidualRow<D>.
template <int D, typename Fn>
void for_each_residual(const Sphere<D>& s, const Sphere<D>& s_prev,
                       const OrientedPointCloud<D>& cloud, int pin_index,
                       const ResolvedParams& rp, std::vector<int>& scratch, Fn&& fn) {
  const double sqrt_w1 = std::sqrt(rp.omega1);
  {
    ResidualRow<D> row;
    switch (rp.maximality) {
      case MaximalityVariant::kConstantPressure:
        row = maximality_residual<D>(s.radius, s_prev.radius, rp.epsilon);
        break;
      case MaximalityVariant::kInverseRadius:
        row = inverse_radius_residual<D>(s.radius, rp.inverse_radius_clamp);
        break;
      case MaximalityVariant::kTargetRadius:
        row = target_radius_residual<D>(s.radius, rp.target_radius);
        break;
    }
    row.value *= sqrt_w1;
    row.grad *= sqrt_w1;
    fn(row);
  }

  if (rp.omega2 > 0.0) {
    cloud.neighbors_within(s_prev.center, s_prev.radius + rp.h_support, scratch);
    for (const int i : scratch) {
      const Vec<D>& p = cloud.point(i);
      const double w = inscription_support_weight(s_prev, p, rp.h_support);
      if (w <= 0.0) continue;
      const Vec<D>& n = cloud.normal(i);
      double x = 0.0;
      switch (rp.inscription) {
        case InscriptionVariant::kBlended:
          x = blend_weight(s_prev.center, p, n, rp.h_blend);
          break;
        case InscriptionVariant::kPointOnly:
          x = 0.0;
          break;
        case InscriptionVariant::kPlaneOnly:
          x = 1.0;
          break;
      }
      const double coeff_plane = rp.omega2 * w * x;
      const double coeff_point = rp.omega2 * w * (1.0 - x);
      if (coeff_plane > 0.0) {
        const double sq = std::sqrt(coeff_plane);
        ResidualRow<D> row = detail::plane_row(s, p, n, sq);
        if (rp.irls) {
          const double prev = sq * phi_plane(s_prev, p, n);
          const double scale = detail::irls_scale(prev, rp.irls_delta);
          row.value *= scale;
          row.grad *= scale;
        }
        fn(row);
      }
      if (coeff_point > 0.0) {
        const double sq = std::sqrt(coeff_point);
        ResidualRow<D> row = detail::point_row(s, p, sq);
        if (rp.irls) {
          const double prev = sq * phi_point(s_prev, p);
          const double scale = detail::irls_scale(prev, rp.irls_delta);
          row.value *= scale;
          row.grad *= scale;
        }
        fn(row);
      }
    }
  }

  if (rp.pin_weight > 0.0) {
    ResidualRow<D> row = pinning_residual<D>(s, cloud.point(pin_index), rp.d_pin);
    const double sq = std::sqrt(rp.pin_weight);
    row.value *= sq;
    row.grad *= sq;
    fn(row);
  }
}

template <int D>
struct NormalSystem {
  SphereMat<D> JtJ = SphereMat<D>::Zero();
  SphereGrad<D> Jtr = SphereGrad<D>::Zero();
  double energy = 0.0;
};

/// Accumulates the Gauss-Newton normal equations and the total energy for
/// sphere s around the previous iterate s_prev.
template <int D>
NormalSystem<D> build_system(const Sphere<D>& s, const Sphere<D>& s_prev,
                             const OrientedPointCloud<D>& cloud, int pin_index,
                             const ResolvedParams& rp, std::vector<int>& scratch) {
  NormalSystem<D> sys;
  for_each_residual(s, s_prev, cloud, pin_index, rp, scratch,
                    [&sys](const ResidualRow<D>& row) {
                      sys.JtJ.noalias() += row.grad * row.grad.transpose();
                      sys.Jtr.noalias() += row.grad * row.value;
                      sys.energy += row.value * row.value;
                    });
  return sys;
}

/// Solves (JtJ + damping I) delta = -Jtr by dense factorization.
/// Throws SingularSystemError when the damped matrix is not invertible.
template <int D>
SphereGrad<D> gauss_newton_step(const SphereMat<D>& JtJ, const SphereGrad<D>& Jtr,
                                double damping) {
  SphereMat<D> A = JtJ;
  A.diagonal().array() += damping;
  Eigen::FullPivLU<SphereMat<D>> lu(A);
  if (!lu.isInvertible())
    throw SingularSystemError("gauss_newton_step: damped normal matrix is singular");
  SphereGrad<D> delta = lu.solve(-Jtr);
  if (!delta.allFinite())
    throw SingularSystemError("gauss_newton_step: non-finite step");
  return delta;
}

/// One converged (or abandoned) sphere plus its diagnostics.
template <int D>
struct MedialAtom {
  Sphere<D> sphere;
  int pin_index = -1;
  int iterations_run = 0;
  bool converged = false;
  double final_step_norm = std::numeric_limits<double>::infinity();
  bool solver_error = false;
};

template <int D>
struct MedialResult {
  std::vector<MedialAtom<D>> atoms;
  SolverConfig config;
  std::uint64_t cloud_checksum = 0;

  int n_converged() const {
    int n = 0;
    for (const auto& a : atoms) n += a.converged ? 1 : 0;
    return n;
  }
  int n_failed() const {
    int n = 0;
    for (const auto& a : atoms) n += a.solver_error ? 1 : 0;
    return n;
  }
};

/// Initial sphere for a pin. Random mode draws the center uniformly in the
/// bounding box and the radius in [0.05, 0.5]*diag from the pin's stream.
/// Deterministic mode starts from a quarter-diagonal inward tangent ball and
/// halves the inset until the ball is (nearly) empty of cloud points, so
/// thin features do not get pierced by the initial guess.
template <int D>
Sphere<D> initial_sphere(const OrientedPointCloud<D>& cloud, int pin_index,
                         const SolverConfig& cfg) {
  Sphere<D> s;
  if (cfg.init == InitMode::kRandom) {
    Rng rng(cfg.seed, static_cast<std::uint64_t>(pin_index));
    for (int k = 0; k < D; ++k)
      s.center[k] = rng.uniform(cloud.bbox_min()[k], cloud.bbox_max()[k]);
    s.radius = rng.uniform(0.05, 0.5) * cloud.diag();
  } else {
    const Vec<D>& p = cloud.point(pin_index);
    const Vec<D>& n = cloud.normal(pin_index);
    // Points within three support kernels of the ball surface do not count
    // as blockers (boundary noise at that scale is the solver's to average
    // out), and only a quorum of deep points marks a real wall.
    const double tolerance = 3.0 * cfg.h_support * cloud.diag() / 100.0;
    const int quorum = 12;
    double t = 0.25 * cloud.diag();
    std::vector<int> hits;
    for (int k = 0; k < 8; ++k) {
      const double probe = 0.95 * t - tolerance;
      int blockers = 0;
      if (probe > 0.0) {
        cloud.neighbors_within(p - t * n, probe, hits);
        for (int i : hits)
          if (i != pin_index && ++blockers >= quorum) break;
      }
      if (blockers < quorum) break;
      t *= 0.5;
    }
    s.center = p - t * n;
    s.radius = t;
  }
  return s;
}

namespace detail {

/// Energy of the frozen-weight problem at s (weights at s_prev).
template <int D>
double system_energy(const Sphere<D>& s, const Sphere<D>& s_prev,
                     const OrientedPointCloud<D>& cloud, int pin_index,
                     const ResolvedParams& rp, std::vector<int>& scratch) {
  double energy = 0.0;
  for_each_residual(s, s_prev, cloud, pin_index, rp, scratch,
                    [&energy](const ResidualRow<D>& row) {
                      energy += row.value * row.value;
                    });
  return energy;
}

/// Line-search merit for a candidate step. Same terms as the frozen
/// problem, except each point's support weight is the larger of its weight
/// seen from s_prev and from the candidate: the previous support window
/// cannot see obstacles a long step jumps across, and a candidate must not
/// be accepted blind to them.
template <int D>
double line_search_energy(const Sphere<D>& cand, const Sphere<D>& s_prev,
                          const OrientedPointCloud<D>& cloud, int pin_index,
                          const ResolvedParams& rp, std::vector<int>& scratch) {
  double energy = 0.0;
  {
    ResidualRow<D> row;
    switch (rp.maximality) {
      case MaximalityVariant::kConstantPressure:
        row = maximality_residual<D>(cand.radius, s_prev.radius, rp.epsilon);
        break;
      case MaximalityVariant::kInverseRadius:
        row = inverse_radius_residual<D>(cand.radius, rp.inverse_radius_clamp);
        break;
      case MaximalityVariant::kTargetRadius:
        row = target_radius_residual<D>(cand.radius, rp.target_radius);
        break;
    }
    energy += rp.omega1 * row.value * row.value;
  }
  if (rp.omega2 > 0.0) {
    const double reach_prev = s_prev.radius + rp.h_support;
    const double reach_cand = cand.radius + rp.h_support;
    if (reach_cand > (cand.center - s_prev.center).norm() + reach_prev) {
      cloud.neighbors_within(cand.center, reach_cand, scratch);
    } else if (reach_prev >= (cand.center - s_prev.center).norm() + reach_cand) {
      cloud.neighbors_within(s_prev.center, reach_prev, scratch);
    } else {
      std::vector<int> extra;
      cloud.neighbors_within(s_prev.center, reach_prev, scratch);
      cloud.neighbors_within(cand.center, reach_cand, extra);
      scratch.insert(scratch.end(), extra.begin(), extra.end());
      std::sort(scratch.begin(), scratch.end());
      scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
    }
    for (const int i : scratch) {
      const Vec<D>& p = cloud.point(i);
      const double w = std::max(inscription_support_weight(s_prev, p, rp.h_support),
                                inscription_support_weight(cand, p, rp.h_support));
      if (w <= 0.0) continue;
      const Vec<D>& n = cloud.normal(i);
      double x = 0.0;
      switch (rp.inscription) {
        case InscriptionVariant::kBlended:
          x = blend_weight(s_prev.center, p, n, rp.h_blend);
          break;
        case InscriptionVariant::kPointOnly:
          x = 0.0;
          break;
        case InscriptionVariant::kPlaneOnly:
          x = 1.0;
          break;
      }
      double e_pl = 0.0, e_pt = 0.0;
      if (x > 0.0) {
        const double phi = phi_plane(cand, p, n);
        double term = rp.omega2 * w * x * phi * phi;
        if (rp.irls) {
          const double prev = std::sqrt(rp.omega2 * w * x) * phi_plane(s_prev, p, n);
          const double sc = irls_scale(prev, rp.irls_delta);
          term *= sc * sc;
        }
        e_pl = term;
      }
      if (x < 1.0) {
        const double phi = phi_point(cand, p);
        double term = rp.omega2 * w * (1.0 - x) * phi * phi;
        if (rp.irls) {
          const double prev = std::sqrt(rp.omega2 * w * (1.0 - x)) * phi_point(s_prev, p);
          const double sc = irls_scale(prev, rp.irls_delta);
          term *= sc * sc;
        }
        e_pt = term;
      }
      energy += e_pl + e_pt;
    }
  }
  if (rp.pin_weight > 0.0) {
    const ResidualRow<D> row = pinning_residual<D>(cand, cloud.point(pin_index), rp.d_pin);
    energy += rp.pin_weight * row.value * row.value;
  }
  return energy;
}

/// Fixed-point iteration: one damped Gauss-Newton step per iteration, all
/// frozen weights evaluated at the current iterate. The step is backtracked
/// until the line-search merit decreases; without this the one-sided
/// penetration ramps admit grow/collapse limit cycles.
template <int D>
MedialAtom<D> solve_sphere_resolved(int pin_index, const OrientedPointCloud<D>& cloud,
                                    const ResolvedParams& rp, Sphere<D> s,
                                    std::vector<int>& scratch) {
  constexpr int kMaxBacktracks = 40;
  MedialAtom<D> atom;
  atom.pin_index = pin_index;
  s.radius = std::clamp(s.radius, rp.radius_floor, rp.radius_ceiling);
  try {
    for (int t = 1; t <= rp.max_iters; ++t) {
      const NormalSystem<D> sys = build_system(s, s, cloud, pin_index, rp, scratch);
      const double damping = rp.step_damping * sys.JtJ.trace();
      const SphereGrad<D> delta = gauss_newton_step<D>(sys.JtJ, sys.Jtr, damping);
      const double merit_here = line_search_energy(s, s, cloud, pin_index, rp, scratch);
      double alpha = 1.0;
      Sphere<D> next;
      for (int bt = 0;; ++bt) {
        next.center = s.center + alpha * delta.template head<D>();
        next.radius = std::clamp(s.radius + alpha * delta[D], rp.radius_floor,
                                 rp.radius_ceiling);
        if (bt >= kMaxBacktracks) break;
        if (line_search_energy(next, s, cloud, pin_index, rp, scratch) < merit_here) break;
        alpha *= 0.5;
      }
      const double dr = next.radius - s.radius;
      atom.final_step_norm =
          std::sqrt((next.center - s.center).squaredNorm() + dr * dr);
      s = next;
      atom.iterations_run = t;
      if (atom.final_step_norm < rp.convergence_tol) {
        atom.converged = true;
        break;
      }
    }
  } catch (const SingularSystemError&) {
    atom.solver_error = true;
    atom.converged = false;
  }
  if (rp.pin_weight > 0.0) {
    // The quadratic penalty enforces the contact constraint only up to its
    // weight; project the final iterate onto the constraint surface (least
    // parameter change: half the violation goes to the radius, half moves
    // the center toward the pin).
    const Vec<D> offset = s.center - cloud.point(pin_index);
    const double dist = offset.norm();
    const double viol = dist - (s.radius + rp.d_pin);
    if (viol > 0.0) {
      s.center -= (0.5 * viol) * offset / dist;
      s.radius = std::max(s.radius + 0.5 * viol, rp.radius_floor);
    }
  }
  atom.sphere = s;
  return atom;
}

}  // namespace detail

/// Optimizes the sphere pinned at one point from the given initial guess.
template <int D>
MedialAtom<D> solve_sphere(int pin_index, const OrientedPointCloud<D>& cloud,
                           const SolverConfig& cfg, const Sphere<D>& init) {
  const ResolvedParams rp = resolve(cfg, cloud.diag());
  std::vector<int> scratch;
  return detail::solve_sphere_resolved(pin_index, cloud, rp, init, scratch);
}

/// Runs solve_sphere independently for each pin. Atom order matches pin
/// order and results are identical for any worker count.
template <int D>
MedialResult<D> solve_all(const OrientedPointCloud<D>& cloud, const SolverConfig& cfg,
                          const std::vector<int>& pins, int n_threads = 0) {
  const ResolvedParams rp = resolve(cfg, cloud.diag());
  MedialResult<D> result;
  result.config = cfg;
  result.cloud_checksum = cloud.checksum();
  result.atoms.resize(pins.size());
  const int workers = default_thread_count(n_threads);
  std::vector<std::vector<int>> scratch(static_cast<std::size_t>(std::max(workers, 1)));
  parallel_for(static_cast<int>(pins.size()), workers, [&](int k, int worker) {
    const int pin = pins[static_cast<std::size_t>(k)];
    const Sphere<D> init = initial_sphere(cloud, pin, cfg);
    result.atoms[static_cast<std::size_t>(k)] = detail::solve_sphere_resolved(
        pin, cloud, rp, init, scratch[static_cast<std::size_t>(worker)]);
  });
  return result;
}

template <int D>
MedialResult<D> solve_all(const OrientedPointCloud<D>& cloud, const SolverConfig& cfg,
                          int n_threads = 0) {
  std::vector<int> pins(static_cast<std::size_t>(cloud.size()));
  std::iota(pins.begin(), pins.end(), 0);
  return solve_all(cloud, cfg, pins, n_threads);
}

/// IRLS variant: every inscription residual is rescaled each iteration by
/// 1/sqrt(max(|rho_prev|, delta)), turning the inscription term into an l1
/// objective; the growth constant runs at epsilon / irls_eps_divisor.
template <int D>
MedialResult<D> solve_all_irls(const OrientedPointCloud<D>& cloud, const SolverConfig& cfg,
                               int n_threads = 0) {
  if (cfg.irls != IrlsMode::kL1)
    throw Error("solve_all_irls requires config.irls = l1");
  return solve_all(cloud, cfg, n_threads);
}

}  // namespace lsmat
