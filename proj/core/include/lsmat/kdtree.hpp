#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "lsmat/types.hpp"

namespace lsmat {

/// Static kd-tree over a fixed point set. Built once, queried read-only.
///
/// Radius queries return exactly the index set a linear scan would: the leaf
/// test uses the same squared-distance expression a scan uses, and subtree
/// pruning keeps a small relative slack so borderline points always reach
/// the leaf test.
template <int D>
class KdTree {
 public:
  KdTree() = default;

  explicit KdTree(const std::vector<Vec<D>>& points) { build(points); }

  // Owns a copy of the points so the tree stays valid independently of the
  // container it was built from.
  void build(const std::vector<Vec<D>>& points) {
    points_ = points;
    order_.resize(points.size());
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.clear();
    nodes_.reserve(points.size() / kLeafSize * 2 + 2);
    root_ = -1;
    if (!points.empty()) root_ = build_node(0, static_cast<int>(points.size()));
  }

  std::size_t size() const { return points_.size(); }

  /// Indices i with ||q - p_i|| <= radius, ascending order.
  void radius_indices(const Vec<D>& q, double radius, std::vector<int>& out) const {
    out.clear();
    if (points_.empty() || radius < 0.0) return;
    const double r2 = radius * radius;
    search_radius(root_, q, radius, r2, out);
    std::sort(out.begin(), out.end());
  }

  std::vector<int> radius_indices(const Vec<D>& q, double radius) const {
    std::vector<int> out;
    radius_indices(q, radius, out);
    return out;
  }

  /// Nearest point for which skip(index) is false. Returns -1 if none.
  template <typename SkipFn>
  int nearest_if(const Vec<D>& q, SkipFn&& skip, double* dist_sq_out = nullptr) const {
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    if (!points_.empty()) search_nearest(root_, q, skip, best, best_d2);
    if (dist_sq_out) *dist_sq_out = best_d2;
    return best;
  }

 private:
  static constexpr int kLeafSize = 16;
  // Pruning slack: subtrees are descended unless the splitting slab distance
  // exceeds the radius by more than a few ulps, so the canonical leaf
  // comparison decides every borderline point.
  static constexpr double kPruneSlack = 1.0 + 1e-12;

  struct Node {
    int axis = -1;        // -1 marks a leaf
    double split = 0.0;
    int left = -1, right = -1;
    int begin = 0, end = 0;  // index range into order_ (leaves only)
  };

  int build_node(int begin, int end) {
    Node node;
    if (end - begin <= kLeafSize) {
      node.begin = begin;
      node.end = end;
      nodes_.push_back(node);
      return static_cast<int>(nodes_.size()) - 1;
    }
    // Split the widest axis at the median.
    Vec<D> lo = Vec<D>::Constant(std::numeric_limits<double>::infinity());
    Vec<D> hi = Vec<D>::Constant(-std::numeric_limits<double>::infinity());
    for (int i = begin; i < end; ++i) {
      lo = lo.cwiseMin(points_[order_[i]]);
      hi = hi.cwiseMax(points_[order_[i]]);
    }
    int axis = 0;
    (hi - lo).maxCoeff(&axis);
    const int mid = (begin + end) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](int a, int b) { return points_[a][axis] < points_[b][axis]; });
    node.axis = axis;
    node.split = points_[order_[mid]][axis];
    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    const int left = build_node(begin, mid);
    const int right = build_node(mid, end);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
  }

  void search_radius(int ni, const Vec<D>& q, double radius, double r2,
                     std::vector<int>& out) const {
    const Node& node = nodes_[ni];
    if (node.axis < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const int idx = order_[i];
        if ((points_[idx] - q).squaredNorm() <= r2) out.push_back(idx);
      }
      return;
    }
    const double delta = q[node.axis] - node.split;
    if (delta <= radius * kPruneSlack) search_radius(node.left, q, radius, r2, out);
    if (-delta <= radius * kPruneSlack) search_radius(node.right, q, radius, r2, out);
  }

  template <typename SkipFn>
  void search_nearest(int ni, const Vec<D>& q, SkipFn&& skip, int& best,
                      double& best_d2) const {
    const Node& node = nodes_[ni];
    if (node.axis < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const int idx = order_[i];
        if (skip(idx)) continue;
        const double d2 = (points_[idx] - q).squaredNorm();
        if (d2 < best_d2 || (d2 == best_d2 && idx < best)) {
          best = idx;
          best_d2 = d2;
        }
      }
      return;
    }
    const double delta = q[node.axis] - node.split;
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    search_nearest(near, q, skip, best, best_d2);
    if (delta * delta <= best_d2) search_nearest(far, q, skip, best, best_d2);
  }

  std::vector<Vec<D>> points_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace lsmat
