#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lsmat/error.hpp"
#include "lsmat/kdtree.hpp"
#include "lsmat/rng.hpp"
#include "lsmat/types.hpp"

namespace lsmat {

/// Perturbation request. sigma_p is in percent of the bounding-box diagonal.
struct NoiseSpec {
  enum class Mode { kIsotropic, kAlongNormal };

  double sigma_p = 0.0;
  Mode mode = Mode::kIsotropic;
  double outlier_fraction = 0.0;  // in [0, 1)
  std::uint64_t seed = 0;
};

/// Immutable oriented point set with unit normals, bounding box metadata and
/// a spatial index. Safe to share across threads after construction.
template <int D>
class OrientedPointCloud {
 public:
  static constexpr int kDim = D;

  OrientedPointCloud(std::vector<Vec<D>> points, std::vector<Vec<D>> normals)
      : points_(std::move(points)), normals_(std::move(normals)) {
    if (points_.size() != normals_.size())
      throw Error("point/normal count mismatch");
    if (points_.size() < 2)
      throw Error("need at least 2 points, got " + std::to_string(points_.size()));
    for (std::size_t i = 0; i < normals_.size(); ++i) {
      const double len = normals_[i].norm();
      if (!(len > 1e-12))
        throw Error("zero-length normal at record " + std::to_string(i));
      normals_[i] /= len;
    }
    bbox_min_ = Vec<D>::Constant(std::numeric_limits<double>::infinity());
    bbox_max_ = Vec<D>::Constant(-std::numeric_limits<double>::infinity());
    for (const auto& p : points_) {
      if (!p.allFinite()) throw Error("non-finite point coordinate");
      bbox_min_ = bbox_min_.cwiseMin(p);
      bbox_max_ = bbox_max_.cwiseMax(p);
    }
    diag_ = (bbox_max_ - bbox_min_).norm();
    if (!(diag_ > 0.0)) throw Error("degenerate cloud: bounding box has zero diagonal");
    index_.build(points_);
  }

  int size() const { return static_cast<int>(points_.size()); }
  const Vec<D>& point(int i) const { return points_[i]; }
  const Vec<D>& normal(int i) const { return normals_[i]; }
  const std::vector<Vec<D>>& points() const { return points_; }
  const std::vector<Vec<D>>& normals() const { return normals_; }
  const Vec<D>& bbox_min() const { return bbox_min_; }
  const Vec<D>& bbox_max() const { return bbox_max_; }
  double diag() const { return diag_; }
  const KdTree<D>& index() const { return index_; }

  /// Indices within `radius` of x (inclusive); identical to a linear scan.
  std::vector<int> neighbors_within(const Vec<D>& x, double radius) const {
    return index_.radius_indices(x, radius);
  }
  void neighbors_within(const Vec<D>& x, double radius, std::vector<int>& out) const {
    index_.radius_indices(x, radius, out);
  }

  /// FNV-1a over the raw coordinate bytes; used to tie results to inputs.
  std::uint64_t checksum() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const Vec<D>& v) {
      for (int k = 0; k < D; ++k) {
        std::uint64_t bits;
        const double x = v[k];
        static_assert(sizeof(bits) == sizeof(x));
        std::memcpy(&bits, &x, sizeof(bits));
        for (int b = 0; b < 8; ++b) {
          h ^= (bits >> (8 * b)) & 0xFF;
          h *= 1099511628211ULL;
        }
      }
    };
    for (int i = 0; i < size(); ++i) {
      mix(points_[i]);
      mix(normals_[i]);
    }
    return h;
  }

 private:
  std::vector<Vec<D>> points_;
  std::vector<Vec<D>> normals_;
  Vec<D> bbox_min_, bbox_max_;
  double diag_ = 0.0;
  KdTree<D> index_;
};

using Cloud2 = OrientedPointCloud<2>;
using Cloud3 = OrientedPointCloud<3>;

/// Reads the oriented-point text format: one record per line,
/// `x y nx ny` (2D) or `x y z nx ny nz` (3D), `#` comments, blank lines
/// ignored. Normals are renormalized; record order is preserved.
template <int D>
OrientedPointCloud<D> load_cloud(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::vector<Vec<D>> points, normals;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    double vals[2 * D];
    for (int k = 0; k < 2 * D; ++k) {
      if (!(ls >> vals[k]))
        throw ParseError("expected " + std::to_string(2 * D) + " numeric fields", line_no);
      if (!std::isfinite(vals[k])) throw ParseError("non-finite field", line_no);
    }
    std::string extra;
    if (ls >> extra) throw ParseError("trailing fields", line_no);
    Vec<D> p, n;
    for (int k = 0; k < D; ++k) p[k] = vals[k];
    for (int k = 0; k < D; ++k) n[k] = vals[D + k];
    if (!(n.norm() > 1e-12)) throw ParseError("zero-length normal", line_no);
    points.push_back(p);
    normals.push_back(n);
  }
  if (points.size() < 2)
    throw ParseError("cloud has " + std::to_string(points.size()) +
                     " records, need at least 2");
  return OrientedPointCloud<D>(std::move(points), std::move(normals));
}

/// Writes the same text format with 17 significant digits, which round-trips
/// doubles exactly.
template <int D>
void save_cloud(const OrientedPointCloud<D>& cloud, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  char buf[64];
  for (int i = 0; i < cloud.size(); ++i) {
    std::string row;
    for (int k = 0; k < D; ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g ", cloud.point(i)[k]);
      row += buf;
    }
    for (int k = 0; k < D; ++k) {
      std::snprintf(buf, sizeof(buf), k + 1 < D ? "%.17g " : "%.17g", cloud.normal(i)[k]);
      row += buf;
    }
    out << row << '\n';
  }
  if (!out) throw Error("write failed for '" + path + "'");
}

/// Applies Gaussian displacement noise and bounding-box outliers.
///
/// Inlier noise draws from a per-index stream, so the result is a pure
/// function of (cloud, spec). Noise magnitude and the outlier box both come
/// from the *input* cloud's bounding box. Normals are kept as-is for
/// displaced points; outliers get fresh random unit normals.
template <int D>
OrientedPointCloud<D> perturb(const OrientedPointCloud<D>& cloud, const NoiseSpec& spec) {
  if (spec.sigma_p < 0.0) throw Error("sigma_p must be >= 0");
  if (spec.outlier_fraction < 0.0 || spec.outlier_fraction >= 1.0)
    throw Error("outlier_fraction must be in [0, 1)");
  const int n = cloud.size();
  const double sigma_world = spec.sigma_p * cloud.diag() / 100.0;
  std::vector<Vec<D>> points(cloud.points());
  std::vector<Vec<D>> normals(cloud.normals());

  if (sigma_world > 0.0) {
    for (int i = 0; i < n; ++i) {
      Rng rng(spec.seed, static_cast<std::uint64_t>(i));
      if (spec.mode == NoiseSpec::Mode::kIsotropic) {
        for (int k = 0; k < D; ++k) points[i][k] += sigma_world * rng.normal();
      } else {
        points[i] += sigma_world * rng.normal() * normals[i];
      }
    }
  }

  const int n_outliers = static_cast<int>(spec.outlier_fraction * n);
  if (n_outliers > 0) {
    // Sequential post-pass with its own stream: selection is a partial
    // Fisher-Yates over the original indices.
    Rng rng(spec.seed, 0x6F75746CULL + static_cast<std::uint64_t>(n));
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int i = 0; i < n_outliers; ++i) {
      const int j = i + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n - i));
      std::swap(order[i], order[j]);
    }
    for (int i = 0; i < n_outliers; ++i) {
      const int idx = order[i];
      for (int k = 0; k < D; ++k)
        points[idx][k] = rng.uniform(cloud.bbox_min()[k], cloud.bbox_max()[k]);
      Vec<D> dir;
      double len = 0.0;
      do {
        for (int k = 0; k < D; ++k) dir[k] = rng.normal();
        len = dir.norm();
      } while (len < 1e-12);
      normals[idx] = dir / len;
    }
  }

  return OrientedPointCloud<D>(std::move(points), std::move(normals));
}

}  // namespace lsmat
