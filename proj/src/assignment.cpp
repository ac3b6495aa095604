#include "adaptseg/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "adaptseg/error.hpp"

namespace adaptseg {

NormalizedErrors normalize_errors(std::vector<PointId> points, std::vector<std::vector<double>> d) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  NormalizedErrors ne;
  ne.points = std::move(points);
  ne.d = std::move(d);
  if (ne.d.size() != ne.points.size()) fail(ErrorKind::InvalidArgument, "error rows and points differ in count");
  const std::size_t classes = ne.d.empty() ? 0 : ne.d.front().size();
  ne.mu.assign(classes, kInf);
  ne.max.assign(classes, -kInf);
  for (const auto& row : ne.d) {
    if (row.size() != classes) fail(ErrorKind::InvalidArgument, "ragged error matrix");
    for (std::size_t j = 0; j < classes; ++j) {
      ne.mu[j] = std::min(ne.mu[j], row[j]);
      ne.max[j] = std::max(ne.max[j], row[j]);
    }
  }
  ne.degenerate.assign(classes, false);
  ne.D.assign(ne.d.size(), std::vector<double>(classes, 0.0));
  for (std::size_t j = 0; j < classes; ++j) {
    const bool unfit = std::isinf(ne.mu[j]);
    ne.degenerate[j] = !unfit && ne.max[j] == ne.mu[j];
    for (std::size_t i = 0; i < ne.d.size(); ++i) {
      if (unfit) {
        ne.D[i][j] = kInf;
      } else if (!ne.degenerate[j]) {
        ne.D[i][j] = std::isinf(ne.max[j]) ? 0.0 : (ne.d[i][j] - ne.mu[j]) / (ne.max[j] - ne.mu[j]);
      }
    }
  }
  return ne;
}

NormalizedErrors normalized_errors(const PointSet& ps, std::span<const double> f, const Kernel& kernel,
                                   const ClassState& state) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::size_t classes = state.class_count();
  std::vector<std::vector<double>> d(state.unsure.size(), std::vector<double>(classes, kInf));
  std::vector<Point> query;
  for (PointId i : state.unsure) query.push_back(ps[i]);
  for (std::size_t j = 0; j < classes; ++j) {
    std::vector<Point> pts;
    std::vector<double> vals;
    for (PointId k : state.grown[j]) {
      pts.push_back(ps[k]);
      vals.push_back(f[k]);
    }
    std::vector<double> predicted;
    try {
      predicted = Interpolant::fit(kernel, pts, vals).eval_many(query);
    } catch (const Error&) {
      continue;  // column stays +inf
    }
    for (std::size_t r = 0; r < state.unsure.size(); ++r) d[r][j] = std::abs(f[state.unsure[r]] - predicted[r]);
  }
  return normalize_errors(state.unsure, std::move(d));
}

FinalPartition partition_without_assignment(const ClassState& state) {
  return {state.grown, state.label, state.provenance};
}

FinalPartition final_assign(const PointSet& ps, std::span<const double> f, const Kernel& kernel,
                            const ClassState& state) {
  FinalPartition fp = partition_without_assignment(state);
  if (state.unsure.empty()) return fp;
  const std::size_t classes = state.class_count();
  if (classes == 0) fail(ErrorKind::InvalidArgument, "final assignment needs at least one class");

  const NormalizedErrors ne = normalized_errors(ps, f, kernel, state);
  for (std::size_t r = 0; r < ne.points.size(); ++r) {
    const PointId i = ne.points[r];
    // Distances to the grown sets are fixed for the whole phase.
    std::vector<std::pair<double, std::size_t>> by_distance;
    for (std::size_t j = 0; j < classes; ++j) {
      double best = std::numeric_limits<double>::infinity();
      for (PointId k : state.grown[j]) best = std::min(best, squared_distance(ps[i], ps[k]));
      by_distance.emplace_back(best, j);
    }
    std::sort(by_distance.begin(), by_distance.end());
    std::size_t chosen = by_distance[0].second;
    if (classes >= 2) {
      const std::size_t j = by_distance[0].second;
      const std::size_t k = by_distance[1].second;
      const bool raw = ne.degenerate[j] && ne.degenerate[k];
      const double score_j = raw ? ne.d[r][j] : ne.D[r][j];
      const double score_k = raw ? ne.d[r][k] : ne.D[r][k];
      chosen = score_j <= score_k ? j : k;
    }
    fp.final_sets[chosen].push_back(i);
    fp.label[i] = static_cast<int>(chosen + 1);
    fp.provenance[i] = Provenance::Final;
  }
  return fp;
}

void check_final_partition(const FinalPartition& fp, const ClassState& state, bool require_cover) {
  auto broken = [](const std::string& what) { fail(ErrorKind::Internal, "final partition invariant violated: " + what); };
  const std::size_t n = fp.label.size();
  if (fp.final_sets.size() != state.class_count()) broken("class count changed");
  std::vector<int> owner(n, 0);
  for (std::size_t j = 0; j < fp.final_sets.size(); ++j) {
    for (PointId i : fp.final_sets[j]) {
      if (i >= n) broken("member id out of range");
      if (owner[i] != 0) broken("site " + std::to_string(i + 1) + " is in two final sets");
      owner[i] = static_cast<int>(j + 1);
      if (fp.label[i] != owner[i]) broken("label disagrees with membership");
    }
    for (PointId i : state.grown[j]) {
      if (owner[i] != static_cast<int>(j + 1)) broken("grown site " + std::to_string(i + 1) + " lost its class");
    }
  }
  for (PointId i = 0; i < n; ++i) {
    if (owner[i] == 0 && (require_cover || fp.label[i] != 0)) broken("site " + std::to_string(i + 1) + " is not covered");
  }
}

}  // namespace adaptseg
