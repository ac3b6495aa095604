#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "adaptseg/geometry.hpp"

namespace adaptseg {

/// Disjoint-set forest with union by size and path halving.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t x);
  /// Returns false if a and b were already joined.
  bool unite(std::size_t a, std::size_t b);

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

/// Labels over all N sites: 0 for sites outside every component, otherwise
/// 1..J. Components are numbered by their smallest member id.
struct ComponentLabeling {
  std::vector<int> label;
  int count = 0;
  std::vector<std::size_t> sizes;  // sizes[j - 1] for component j

  std::vector<std::vector<PointId>> members() const;
};

std::vector<Edge> filter_edges(std::span<const Edge> edges, const std::vector<bool>& good);

/// Kruskal-style sweep over length-sorted edges with a union-find over the
/// good sites. Edges touching a non-good site are ignored; isolated good sites
/// form singleton components.
ComponentLabeling spanning_forest(std::span<const Edge> edges, std::span<const PointId> good_ids,
                                  std::size_t n_points);

struct MajorSelection {
  ComponentLabeling labeling;
  std::vector<PointId> demoted;  // ascending
};

/// Dissolves components smaller than min_size. Throws Numeric if none
/// survives so the caller can retry with a different threshold.
MajorSelection select_major_components(const ComponentLabeling& cl, std::size_t min_size);

}  // namespace adaptseg
