#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "adaptseg/geometry.hpp"
#include "adaptseg/kernel.hpp"

namespace adaptseg {

/// Regular grid over [0,1]^2, row-major in y then x, both ends included.
struct EvalGrid {
  double step = 0.01;
  std::size_t per_axis = 0;
  std::vector<Point> points;

  static EvalGrid unit_square(double step);
};

struct SafeZone {
  double q = 0.0;
  std::vector<bool> safe_sites;  // per data site: its closed 2q-ball is class-pure
  std::vector<bool> mask;        // per grid node

  std::size_t safe_node_count() const;
};

/// A labeled site is a safe center when no site carrying a different label
/// (unlabeled sites included) lies in its closed 2q-ball. Grid nodes within
/// distance q of a safe center are safe. `labels` uses 0 for unlabeled.
SafeZone safe_zone(const PointSet& ps, std::span<const int> labels, const EvalGrid& grid, double q);

/// u = u_j on the region whose nearest labeled site belongs to class j, with
/// u_j the interpolant on the sites of class j.
class PiecewiseApproximant {
 public:
  PiecewiseApproximant(const PointSet& ps, std::span<const double> f, const Kernel& kernel,
                       std::span<const int> labels, int class_count);
  // The index refers to coords_, so copies would dangle.
  PiecewiseApproximant(const PiecewiseApproximant&) = delete;
  PiecewiseApproximant& operator=(const PiecewiseApproximant&) = delete;
  PiecewiseApproximant(PiecewiseApproximant&&) noexcept = default;
  PiecewiseApproximant& operator=(PiecewiseApproximant&&) noexcept = default;

  int class_at(Point p) const;
  double operator()(Point p) const;
  const Interpolant& piece(int cls) const { return pieces_[static_cast<std::size_t>(cls - 1)]; }
  int class_count() const { return static_cast<int>(pieces_.size()); }

  struct GridValues {
    std::vector<int> cls;
    std::vector<double> u;
  };
  GridValues evaluate(std::span<const Point> pts, unsigned workers = 1) const;

 private:
  std::vector<Point> coords_;
  std::vector<int> labels_;
  KdTree labeled_;
  std::vector<Interpolant> pieces_;
};

/// Same Newton-basis fit on every site.
Interpolant global_interpolant(const PointSet& ps, std::span<const double> f, const Kernel& kernel);

/// Blocked Newton-form evaluation spread over worker threads.
std::vector<double> evaluate_parallel(const Interpolant& s, std::span<const Point> pts, unsigned workers);

struct ErrorReport {
  std::optional<double> linf_safe_segmented;
  std::optional<double> linf_segmented;
  std::optional<double> linf_safe_global;
  std::optional<double> linf_global;
};

/// Max-norm errors over the grid and over its safe nodes. Safe errors stay
/// empty when no node is safe.
ErrorReport error_report(std::span<const double> u_segmented, std::span<const double> u_global,
                         std::span<const double> f_true, const std::vector<bool>& safe);

}  // namespace adaptseg
