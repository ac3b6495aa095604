#include "adaptseg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "adaptseg/error.hpp"

namespace adaptseg {

namespace {

constexpr std::size_t kLeafSize = 8;

double coord(Point p, int axis) { return axis == 0 ? p.x : p.y; }

// Heap ordered so that the front is the worst (farthest, then largest id) kept
// candidate.
bool heap_less(const std::pair<double, PointId>& a, const std::pair<double, PointId>& b) {
  return a.first < b.first || (a.first == b.first && a.second < b.second);
}

std::string fmt_point(Point p) { return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")"; }

}  // namespace

double distance(Point a, Point b) { return std::sqrt(squared_distance(a, b)); }

KdTree::KdTree(std::span<const Point> coords, std::vector<PointId> members)
    : coords_(coords), ids_(std::move(members)) {
  for (PointId id : ids_) {
    if (id >= coords_.size()) fail(ErrorKind::InvalidArgument, "kd-tree member id out of range");
  }
  if (!ids_.empty()) {
    nodes_.reserve(2 * ids_.size() / kLeafSize + 2);
    build(0, ids_.size());
  }
}

std::size_t KdTree::build(std::size_t begin, std::size_t end) {
  const std::size_t index = nodes_.size();
  nodes_.push_back(Node{begin, end});
  if (end - begin <= kLeafSize) return index;

  double lo[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  double hi[2] = {-lo[0], -lo[1]};
  for (std::size_t i = begin; i < end; ++i) {
    const Point p = coords_[ids_[i]];
    lo[0] = std::min(lo[0], p.x);
    hi[0] = std::max(hi[0], p.x);
    lo[1] = std::min(lo[1], p.y);
    hi[1] = std::max(hi[1], p.y);
  }
  const int axis = (hi[0] - lo[0]) >= (hi[1] - lo[1]) ? 0 : 1;
  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(ids_.begin() + static_cast<std::ptrdiff_t>(begin), ids_.begin() + static_cast<std::ptrdiff_t>(mid),
                   ids_.begin() + static_cast<std::ptrdiff_t>(end), [&](PointId a, PointId b) {
                     const double ca = coord(coords_[a], axis);
                     const double cb = coord(coords_[b], axis);
                     return ca < cb || (ca == cb && a < b);
                   });
  const double split = coord(coords_[ids_[mid]], axis);
  const std::size_t left = build(begin, mid);
  const std::size_t right = build(mid, end);
  Node& node = nodes_[index];
  node.axis = axis;
  node.split = split;
  node.left = left;
  node.right = right;
  return index;
}

void KdTree::search_knn(std::size_t node_index, Point query, std::size_t k,
                        std::vector<std::pair<double, PointId>>& heap) const {
  const Node& node = nodes_[node_index];
  if (node.axis < 0) {
    for (std::size_t i = node.begin; i < node.end; ++i) {
      const PointId id = ids_[i];
      const std::pair<double, PointId> cand{squared_distance(query, coords_[id]), id};
      if (heap.size() < k) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end(), heap_less);
      } else if (heap_less(cand, heap.front())) {
        std::pop_heap(heap.begin(), heap.end(), heap_less);
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end(), heap_less);
      }
    }
    return;
  }
  // Left holds coordinates <= split, right holds coordinates >= split.
  const double diff = coord(query, node.axis) - node.split;
  const std::size_t near = diff <= 0.0 ? node.left : node.right;
  const std::size_t far = diff <= 0.0 ? node.right : node.left;
  search_knn(near, query, k, heap);
  // Equal distances must still be visited so that id tie-breaking is exact.
  if (heap.size() < k || diff * diff <= heap.front().first) search_knn(far, query, k, heap);
}

std::vector<Neighbor> KdTree::k_nearest(Point query, std::size_t k) const {
  k = std::min(k, ids_.size());
  std::vector<std::pair<double, PointId>> heap;
  heap.reserve(k + 1);
  if (k > 0) search_knn(0, query, k, heap);
  std::sort_heap(heap.begin(), heap.end(), heap_less);
  std::vector<Neighbor> out;
  out.reserve(heap.size());
  for (const auto& [d2, id] : heap) out.push_back({id, std::sqrt(d2)});
  return out;
}

Neighbor KdTree::nearest(Point query) const {
  if (ids_.empty()) fail(ErrorKind::InvalidArgument, "nearest query on an empty kd-tree");
  return k_nearest(query, 1).front();
}

void KdTree::search_radius(std::size_t node_index, Point query, double r2, std::vector<PointId>& out) const {
  const Node& node = nodes_[node_index];
  if (node.axis < 0) {
    for (std::size_t i = node.begin; i < node.end; ++i) {
      if (squared_distance(query, coords_[ids_[i]]) <= r2) out.push_back(ids_[i]);
    }
    return;
  }
  const double diff = coord(query, node.axis) - node.split;
  if (diff <= 0.0 || diff * diff <= r2) search_radius(node.left, query, r2, out);
  if (diff >= 0.0 || diff * diff <= r2) search_radius(node.right, query, r2, out);
}

std::vector<PointId> KdTree::within_radius(Point query, double radius) const {
  std::vector<PointId> out;
  if (!ids_.empty() && radius >= 0.0) search_radius(0, query, radius * radius, out);
  return out;
}

PointSet::PointSet(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.empty()) fail(ErrorKind::InvalidArgument, "point set must contain at least one point");
  for (const Point& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) fail(ErrorKind::InvalidArgument, "non-finite coordinate " + fmt_point(p));
  }
  std::vector<PointId> order(points_.size());
  std::iota(order.begin(), order.end(), PointId{0});
  std::sort(order.begin(), order.end(), [&](PointId a, PointId b) {
    const Point& pa = points_[a];
    const Point& pb = points_[b];
    return pa.x < pb.x || (pa.x == pb.x && (pa.y < pb.y || (pa.y == pb.y && a < b)));
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (points_[order[i - 1]] == points_[order[i]]) {
      const PointId a = std::min(order[i - 1], order[i]);
      const PointId b = std::max(order[i - 1], order[i]);
      fail(ErrorKind::InvalidArgument, "duplicate points: ids " + std::to_string(a + 1) + " and " +
                                           std::to_string(b + 1) + " both at " + fmt_point(points_[a]));
    }
  }
  reindex();
}

PointSet::PointSet(const PointSet& other) : points_(other.points_) { reindex(); }

PointSet& PointSet::operator=(const PointSet& other) {
  if (this != &other) {
    points_ = other.points_;
    reindex();
  }
  return *this;
}

// Moving a vector keeps its buffer, so the tree's span stays valid.
PointSet::PointSet(PointSet&&) noexcept = default;
PointSet& PointSet::operator=(PointSet&&) noexcept = default;

void PointSet::reindex() {
  std::vector<PointId> all(points_.size());
  std::iota(all.begin(), all.end(), PointId{0});
  tree_ = KdTree(points_, std::move(all));
}

std::vector<Neighbor> PointSet::k_nearest(Point query, std::size_t k) const {
  if (k < 1 || k > size()) {
    fail(ErrorKind::InvalidArgument,
         "k_nearest: k=" + std::to_string(k) + " outside [1, N] with N=" + std::to_string(size()));
  }
  return tree_.k_nearest(query, k);
}

double fill_distance(const PointSet& ps, Box domain, double probe_step) {
  if (!(probe_step > 0.0)) fail(ErrorKind::InvalidArgument, "fill_distance: probe_step must be positive");
  if (!(domain.hi.x >= domain.lo.x) || !(domain.hi.y >= domain.lo.y)) {
    fail(ErrorKind::InvalidArgument, "fill_distance: empty domain box");
  }
  auto axis_nodes = [probe_step](double lo, double hi) {
    std::vector<double> nodes;
    const auto steps = static_cast<std::size_t>(std::floor((hi - lo) / probe_step));
    for (std::size_t i = 0; i <= steps; ++i) nodes.push_back(lo + static_cast<double>(i) * probe_step);
    if (nodes.back() < hi) nodes.push_back(hi);
    return nodes;
  };
  const std::vector<double> xs = axis_nodes(domain.lo.x, domain.hi.x);
  const std::vector<double> ys = axis_nodes(domain.lo.y, domain.hi.y);
  double worst = 0.0;
  for (double y : ys) {
    for (double x : xs) worst = std::max(worst, ps.index().nearest({x, y}).distance);
  }
  return worst;
}

double separation_distance(const PointSet& ps) {
  if (ps.size() < 2) fail(ErrorKind::InvalidArgument, "separation_distance needs at least 2 points");
  double best = std::numeric_limits<double>::infinity();
  for (PointId i = 0; i < ps.size(); ++i) best = std::min(best, ps.k_nearest(ps[i], 2)[1].distance);
  return best;
}

std::vector<Edge> neighbor_edge_list(const PointSet& ps, std::size_t n) {
  if (n < 2 || n > ps.size()) {
    fail(ErrorKind::InvalidArgument,
         "neighbor_edge_list: n=" + std::to_string(n) + " outside [2, N] with N=" + std::to_string(ps.size()));
  }
  std::vector<Edge> edges;
  edges.reserve(ps.size() * (n - 1));
  for (PointId i = 0; i < ps.size(); ++i) {
    for (const Neighbor& nb : ps.k_nearest(ps[i], n)) {
      if (nb.id == i) continue;
      edges.push_back({std::min(i, nb.id), std::max(i, nb.id), nb.distance});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& e, const Edge& f) {
    if (e.length != f.length) return e.length < f.length;
    return e.a < f.a || (e.a == f.a && e.b < f.b);
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const Edge& e, const Edge& f) { return e.a == f.a && e.b == f.b; }),
              edges.end());
  return edges;
}

}  // namespace adaptseg
