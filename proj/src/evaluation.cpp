#include "adaptseg/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "adaptseg/error.hpp"
#include "adaptseg/parallel.hpp"

namespace adaptseg {

EvalGrid EvalGrid::unit_square(double step) {
  if (!(step > 0.0) || step > 1.0) fail(ErrorKind::Config, "grid step must lie in (0, 1]");
  EvalGrid g;
  g.step = step;
  g.per_axis = static_cast<std::size_t>(std::llround(1.0 / step)) + 1;
  g.points.reserve(g.per_axis * g.per_axis);
  const double h = 1.0 / static_cast<double>(g.per_axis - 1);
  for (std::size_t iy = 0; iy < g.per_axis; ++iy) {
    for (std::size_t ix = 0; ix < g.per_axis; ++ix) {
      g.points.push_back({static_cast<double>(ix) * h, static_cast<double>(iy) * h});
    }
  }
  return g;
}

std::size_t SafeZone::safe_node_count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
}

SafeZone safe_zone(const PointSet& ps, std::span<const int> labels, const EvalGrid& grid, double q) {
  if (labels.size() != ps.size()) fail(ErrorKind::InvalidArgument, "labels and sites differ in count");
  if (!(q > 0.0)) fail(ErrorKind::InvalidArgument, "safe zone radius must be positive");
  SafeZone zone;
  zone.q = q;
  zone.safe_sites.assign(ps.size(), false);
  std::vector<PointId> centers;
  for (PointId i = 0; i < ps.size(); ++i) {
    if (labels[i] == 0) continue;
    const std::vector<PointId> ball = ps.index().within_radius(ps[i], 2.0 * q);
    zone.safe_sites[i] = std::all_of(ball.begin(), ball.end(), [&](PointId k) { return labels[k] == labels[i]; });
    if (zone.safe_sites[i]) centers.push_back(i);
  }
  zone.mask.assign(grid.points.size(), false);
  if (centers.empty()) return zone;
  const KdTree safe_tree(ps.points(), std::move(centers));
  for (std::size_t g = 0; g < grid.points.size(); ++g) {
    zone.mask[g] = safe_tree.nearest(grid.points[g]).distance <= q;
  }
  return zone;
}

PiecewiseApproximant::PiecewiseApproximant(const PointSet& ps, std::span<const double> f, const Kernel& kernel,
                                           std::span<const int> labels, int class_count)
    : coords_(ps.points().begin(), ps.points().end()), labels_(labels.begin(), labels.end()) {
  if (labels.size() != ps.size() || f.size() != ps.size()) fail(ErrorKind::InvalidArgument, "piecewise input sizes differ");
  if (class_count < 1) fail(ErrorKind::InvalidArgument, "piecewise approximant needs at least one class");
  std::vector<std::vector<Point>> pts(static_cast<std::size_t>(class_count));
  std::vector<std::vector<double>> vals(static_cast<std::size_t>(class_count));
  std::vector<PointId> labeled;
  for (PointId i = 0; i < ps.size(); ++i) {
    const int l = labels[i];
    if (l == 0) continue;
    if (l < 0 || l > class_count) fail(ErrorKind::InvalidArgument, "label out of range");
    labeled.push_back(i);
    pts[static_cast<std::size_t>(l - 1)].push_back(ps[i]);
    vals[static_cast<std::size_t>(l - 1)].push_back(f[i]);
  }
  labeled_ = KdTree(coords_, std::move(labeled));
  for (int j = 0; j < class_count; ++j) {
    pieces_.push_back(Interpolant::fit(kernel, pts[static_cast<std::size_t>(j)], vals[static_cast<std::size_t>(j)]));
  }
}

int PiecewiseApproximant::class_at(Point p) const { return labels_[labeled_.nearest(p).id]; }

double PiecewiseApproximant::operator()(Point p) const { return piece(class_at(p))(p); }

std::vector<double> evaluate_parallel(const Interpolant& s, std::span<const Point> pts, unsigned workers) {
  constexpr std::size_t kChunk = 1024;
  std::vector<double> out(pts.size());
  const std::size_t chunks = (pts.size() + kChunk - 1) / kChunk;
  parallel_for(chunks, workers, [&](std::size_t c) {
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(pts.size(), begin + kChunk);
    const std::vector<double> vals = s.eval_many(pts.subspan(begin, end - begin));
    std::copy(vals.begin(), vals.end(), out.begin() + static_cast<std::ptrdiff_t>(begin));
  });
  return out;
}

PiecewiseApproximant::GridValues PiecewiseApproximant::evaluate(std::span<const Point> pts, unsigned workers) const {
  GridValues gv;
  gv.cls.resize(pts.size());
  gv.u.resize(pts.size());
  std::vector<std::vector<std::size_t>> rows(pieces_.size());
  for (std::size_t g = 0; g < pts.size(); ++g) {
    gv.cls[g] = class_at(pts[g]);
    rows[static_cast<std::size_t>(gv.cls[g] - 1)].push_back(g);
  }
  for (std::size_t j = 0; j < pieces_.size(); ++j) {
    std::vector<Point> sub;
    sub.reserve(rows[j].size());
    for (std::size_t g : rows[j]) sub.push_back(pts[g]);
    const std::vector<double> vals = evaluate_parallel(pieces_[j], sub, workers);
    for (std::size_t k = 0; k < rows[j].size(); ++k) gv.u[rows[j][k]] = vals[k];
  }
  return gv;
}

Interpolant global_interpolant(const PointSet& ps, std::span<const double> f, const Kernel& kernel) {
  return Interpolant::fit(kernel, ps.points(), f);
}

ErrorReport error_report(std::span<const double> u_segmented, std::span<const double> u_global,
                         std::span<const double> f_true, const std::vector<bool>& safe) {
  const std::size_t n = f_true.size();
  if (u_segmented.size() != n || u_global.size() != n || safe.size() != n) {
    fail(ErrorKind::InvalidArgument, "grid error inputs differ in size");
  }
  ErrorReport r;
  if (n == 0) return r;
  double seg = 0.0, glob = 0.0, seg_safe = 0.0, glob_safe = 0.0;
  bool any_safe = false;
  for (std::size_t g = 0; g < n; ++g) {
    const double es = std::abs(u_segmented[g] - f_true[g]);
    const double eg = std::abs(u_global[g] - f_true[g]);
    seg = std::max(seg, es);
    glob = std::max(glob, eg);
    if (safe[g]) {
      any_safe = true;
      seg_safe = std::max(seg_safe, es);
      glob_safe = std::max(glob_safe, eg);
    }
  }
  r.linf_segmented = seg;
  r.linf_global = glob;
  if (any_safe) {
    r.linf_safe_segmented = seg_safe;
    r.linf_safe_global = glob_safe;
  }
  return r;
}

}  // namespace adaptseg
