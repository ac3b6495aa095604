#include "adaptseg/splitting.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "adaptseg/error.hpp"

namespace adaptseg {

UnionFind::UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  return true;
}

std::vector<std::vector<PointId>> ComponentLabeling::members() const {
  std::vector<std::vector<PointId>> out(static_cast<std::size_t>(count));
  for (PointId i = 0; i < label.size(); ++i) {
    if (label[i] > 0) out[static_cast<std::size_t>(label[i] - 1)].push_back(i);
  }
  return out;
}

std::vector<Edge> filter_edges(std::span<const Edge> edges, const std::vector<bool>& good) {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.a >= good.size() || e.b >= good.size()) fail(ErrorKind::InvalidArgument, "edge endpoint outside mask");
    if (good[e.a] && good[e.b]) out.push_back(e);
  }
  return out;
}

ComponentLabeling spanning_forest(std::span<const Edge> edges, std::span<const PointId> good_ids,
                                  std::size_t n_points) {
  std::vector<bool> is_good(n_points, false);
  for (PointId id : good_ids) {
    if (id >= n_points) fail(ErrorKind::InvalidArgument, "good id outside the point range");
    is_good[id] = true;
  }
  UnionFind forest(n_points);
  for (const Edge& e : edges) {
    if (e.a < n_points && e.b < n_points && is_good[e.a] && is_good[e.b]) forest.unite(e.a, e.b);
  }

  ComponentLabeling cl;
  cl.label.assign(n_points, 0);
  std::vector<int> root_label(n_points, 0);
  for (PointId i = 0; i < n_points; ++i) {
    if (!is_good[i]) continue;
    const std::size_t root = forest.find(i);
    if (root_label[root] == 0) {
      root_label[root] = ++cl.count;
      cl.sizes.push_back(0);
    }
    cl.label[i] = root_label[root];
    ++cl.sizes[static_cast<std::size_t>(cl.label[i] - 1)];
  }
  return cl;
}

MajorSelection select_major_components(const ComponentLabeling& cl, std::size_t min_size) {
  if (min_size < 1) fail(ErrorKind::Config, "minimum component size must be at least 1");
  std::vector<int> renumber(cl.sizes.size() + 1, 0);
  MajorSelection sel;
  for (std::size_t j = 0; j < cl.sizes.size(); ++j) {
    if (cl.sizes[j] >= min_size) {
      renumber[j + 1] = ++sel.labeling.count;
      sel.labeling.sizes.push_back(cl.sizes[j]);
    }
  }
  if (sel.labeling.count == 0) {
    fail(ErrorKind::Numeric, "no component reaches the minimum size " + std::to_string(min_size) +
                                 "; retry with a larger threshold factor or a smaller minimum size");
  }
  sel.labeling.label.resize(cl.label.size());
  for (PointId i = 0; i < cl.label.size(); ++i) {
    const int l = cl.label[i];
    sel.labeling.label[i] = l > 0 ? renumber[static_cast<std::size_t>(l)] : 0;
    if (l > 0 && sel.labeling.label[i] == 0) sel.demoted.push_back(i);
  }
  return sel;
}

}  // namespace adaptseg
