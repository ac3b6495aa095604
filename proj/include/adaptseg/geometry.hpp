#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace adaptseg {

/// Zero-based index of a data site. Files and reports print `id + 1`.
using PointId = std::size_t;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double squared_distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double distance(Point a, Point b);

struct Neighbor {
  PointId id = 0;
  double distance = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Strict weak order used everywhere neighbors are ranked: by distance, then
/// by ascending id.
inline bool neighbor_less(const Neighbor& a, const Neighbor& b) {
  return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
}

/// Static 2-d tree over a subset of an external coordinate array. The
/// coordinate array must outlive the tree. Queries are exact and return
/// neighbors ordered by `neighbor_less`.
class KdTree {
 public:
  KdTree() = default;
  KdTree(std::span<const Point> coords, std::vector<PointId> members);

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  std::span<const PointId> members() const { return ids_; }

  std::vector<Neighbor> k_nearest(Point query, std::size_t k) const;
  Neighbor nearest(Point query) const;
  /// All members within the closed ball of the given radius, unordered.
  std::vector<PointId> within_radius(Point query, double radius) const;

 private:
  struct Node {
    std::size_t begin = 0;
    std::size_t end = 0;
    int axis = -1;  // -1 marks a leaf
    double split = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
  };

  std::size_t build(std::size_t begin, std::size_t end);
  void search_knn(std::size_t node, Point query, std::size_t k, std::vector<std::pair<double, PointId>>& heap) const;
  void search_radius(std::size_t node, Point query, double r2, std::vector<PointId>& out) const;

  std::span<const Point> coords_;
  std::vector<PointId> ids_;
  std::vector<Node> nodes_;
};

/// Immutable set of pairwise distinct sites with a spatial index.
class PointSet {
 public:
  /// Throws InvalidArgument on an empty input or on duplicate sites.
  explicit PointSet(std::vector<Point> points);

  PointSet(const PointSet& other);
  PointSet& operator=(const PointSet& other);
  PointSet(PointSet&&) noexcept;
  PointSet& operator=(PointSet&&) noexcept;

  std::size_t size() const { return points_.size(); }
  const Point& operator[](PointId id) const { return points_[id]; }
  std::span<const Point> points() const { return points_; }
  const KdTree& index() const { return tree_; }

  /// Throws InvalidArgument unless 1 <= k <= size().
  std::vector<Neighbor> k_nearest(Point query, std::size_t k) const;

 private:
  void reindex();

  std::vector<Point> points_;
  KdTree tree_;
};

struct Box {
  Point lo;
  Point hi;
};

struct Edge {
  PointId a = 0;  // a < b
  PointId b = 0;
  double length = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Largest distance from a probe-grid node of `domain` to its nearest site.
/// Underestimates the fill distance by at most probe_step * sqrt(2) / 2.
double fill_distance(const PointSet& ps, Box domain, double probe_step);

/// Exact minimum pairwise distance; requires at least two sites.
double separation_distance(const PointSet& ps);

/// Edges joining each site to its n-1 nearest other sites, deduplicated by
/// canonical pair and sorted by (length, a, b).
std::vector<Edge> neighbor_edge_list(const PointSet& ps, std::size_t n);

}  // namespace adaptseg
